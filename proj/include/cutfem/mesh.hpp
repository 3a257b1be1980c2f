#pragma once

#include "cutfem/geom.hpp"

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

namespace cutfem {

// Quadtree forest over a union of axis-aligned rectangles. Cells carry exact
// dyadic integer bounds (units of root_size / 2^max_level) so adjacency is
// integer arithmetic.
class cartesian_mesh {
  public:
    static constexpr int max_level = 24;
    using icoord = std::int64_t;

    struct cell {
        long id = -1;
        long parent = -1;
        std::array<long, 4> child{-1, -1, -1, -1}; // SW SE NW NE
        int level = 0;
        bool leaf = true;
        icoord ix0 = 0, iy0 = 0, ix1 = 0, iy1 = 0;
    };

    // Uniform initial mesh of target size h over a union of rectangles. All
    // rectangle corners must lie on the lattice spanned by the first
    // rectangle's origin with pitch hx, hy (hx, hy <= h chosen to divide the
    // first rectangle exactly).
    cartesian_mesh(const std::vector<rect>& domain, double h);

    long cell_count() const { return long(cells_.size()); }
    const cell& at(long id) const { return cells_[id]; }
    bool is_leaf(long id) const { return cells_[id].leaf; }
    rect bounds(long id) const;
    int level(long id) const { return cells_[id].level; }
    double domain_area() const { return domain_area_; }
    const std::vector<rect>& domain() const { return domain_; }

    std::vector<long> leaves() const;
    double leaf_area_sum() const;

    // Split a leaf into 4 children; returns their ids.
    std::array<long, 4> refine(long id);

    // Leaves whose closed box intersects the given closed box.
    std::vector<long> leaves_touching_box(icoord x0, icoord y0, icoord x1, icoord y1) const;
    std::vector<long> leaves_touching(long id) const; // excludes id itself

    // Leaves sharing a positive-length piece of the given side (0 b, 1 r, 2 t, 3 l).
    std::vector<long> side_neighbors(long id, int side) const;

    // S(K)_j: j-layer neighborhood including K itself (vertex adjacency).
    std::vector<long> neighborhood(long id, int j) const;

    // leaf containing a point (ties broken toward lower cells); -1 if outside
    long leaf_at(const vec2& p) const;

    // 2:1 balance across sides. Returns number of refinements performed.
    long enforce_kmesh();
    bool is_balanced() const;

    // integer <-> physical
    double to_x(icoord ix) const { return ox_ + double(ix) * ux_; }
    double to_y(icoord iy) const { return oy_ + double(iy) * uy_; }

    void serialize(std::ostream& os, const std::unordered_map<long, std::string>* type_tag = nullptr) const;

  private:
    std::vector<cell> cells_;
    std::vector<rect> domain_;
    double domain_area_ = 0;
    int nx_ = 0, ny_ = 0;
    double ox_ = 0, oy_ = 0;
    double hx_ = 0, hy_ = 0;
    double ux_ = 0, uy_ = 0; // physical size of one integer unit
    std::vector<long> root_grid_; // nx*ny, -1 where outside the domain

    long root_at(icoord ix, icoord iy) const;
    void collect_in_box(long id, icoord x0, icoord y0, icoord x1, icoord y1, std::vector<long>& out) const;
};

} // namespace cutfem
