#pragma once

#include <memory>
#include <string>

namespace cutfem {

// Minimal arithmetic expression in one variable (named "t"; "theta" is an alias).
// Supports + - * / ^, parentheses, sin cos tan exp log sqrt abs sinh cosh,
// constants pi and e. Symbolically differentiable.
class expression {
  public:
    explicit expression(const std::string& text);
    expression() = default;

    double eval(double t) const;
    expression derivative() const;
    const std::string& text() const { return text_; }
    bool valid() const { return bool(root_); }

    struct node;

  private:
    std::shared_ptr<const node> root_;
    std::string text_;
    explicit expression(std::shared_ptr<const node> r);
};

} // namespace cutfem
