#include "cutfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <set>

namespace cutfem {

namespace {
constexpr std::int64_t UNIT = std::int64_t(1) << cartesian_mesh::max_level;
}

cartesian_mesh::cartesian_mesh(const std::vector<rect>& domain, double h) : domain_(domain) {
    if (domain.empty()) throw empty_domain("cartesian_mesh: no domain rectangles");
    for (const rect& r : domain)
        if (r.area() <= 0) throw empty_domain("cartesian_mesh: degenerate domain rectangle");
    if (h <= 0) throw std::invalid_argument("cartesian_mesh: h > 0 required");

    // pitch: divide the first rectangle exactly with cells of size <= h
    const rect& r0 = domain.front();
    int mx = std::max(1, int(std::ceil(r0.width() / h - 1e-9)));
    int my = std::max(1, int(std::ceil(r0.height() / h - 1e-9)));
    hx_ = r0.width() / mx;
    hy_ = r0.height() / my;

    double gx0 = r0.x0, gy0 = r0.y0, gx1 = r0.x1, gy1 = r0.y1;
    for (const rect& r : domain) {
        gx0 = std::min(gx0, r.x0);
        gy0 = std::min(gy0, r.y0);
        gx1 = std::max(gx1, r.x1);
        gy1 = std::max(gy1, r.y1);
    }
    ox_ = gx0;
    oy_ = gy0;
    nx_ = int(std::llround((gx1 - gx0) / hx_));
    ny_ = int(std::llround((gy1 - gy0) / hy_));
    ux_ = hx_ / double(UNIT);
    uy_ = hy_ / double(UNIT);

    auto on_lattice = [&](double x, double o, double p) {
        double k = (x - o) / p;
        return std::abs(k - std::llround(k)) < 1e-9;
    };
    for (const rect& r : domain) {
        if (!on_lattice(r.x0, ox_, hx_) || !on_lattice(r.x1, ox_, hx_) || !on_lattice(r.y0, oy_, hy_) ||
            !on_lattice(r.y1, oy_, hy_))
            throw std::invalid_argument("cartesian_mesh: domain rectangles must align with the h-lattice");
    }

    root_grid_.assign(size_t(nx_) * ny_, -1);
    auto covered = [&](int i, int j) {
        double cx = ox_ + (i + 0.5) * hx_, cy = oy_ + (j + 0.5) * hy_;
        for (const rect& r : domain)
            if (cx > r.x0 && cx < r.x1 && cy > r.y0 && cy < r.y1) return true;
        return false;
    };
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            if (!covered(i, j)) continue;
            cell c;
            c.id = long(cells_.size());
            c.level = 0;
            c.ix0 = icoord(i) * UNIT;
            c.iy0 = icoord(j) * UNIT;
            c.ix1 = c.ix0 + UNIT;
            c.iy1 = c.iy0 + UNIT;
            root_grid_[size_t(j) * nx_ + i] = c.id;
            cells_.push_back(c);
        }
    if (cells_.empty()) throw empty_domain("cartesian_mesh: no cells cover the domain");

    // domain area via the root cells (exact tiling by construction)
    domain_area_ = double(cells_.size()) * hx_ * hy_;
}

rect cartesian_mesh::bounds(long id) const {
    const cell& c = cells_[id];
    return {to_x(c.ix0), to_y(c.iy0), to_x(c.ix1), to_y(c.iy1)};
}

std::vector<long> cartesian_mesh::leaves() const {
    std::vector<long> out;
    for (const cell& c : cells_)
        if (c.leaf) out.push_back(c.id);
    return out;
}

double cartesian_mesh::leaf_area_sum() const {
    double s = 0;
    for (const cell& c : cells_)
        if (c.leaf) s += bounds(c.id).area();
    return s;
}

std::array<long, 4> cartesian_mesh::refine(long id) {
    if (!cells_[id].leaf) throw not_a_leaf("refine: cell " + std::to_string(id) + " is not a leaf");
    if (cells_[id].level >= max_level) throw iteration_limit("refine: max refinement depth reached");
    cell parent = cells_[id];
    icoord mx = (parent.ix0 + parent.ix1) / 2;
    icoord my = (parent.iy0 + parent.iy1) / 2;
    std::array<long, 4> kids;
    const icoord bx[4] = {parent.ix0, mx, parent.ix0, mx};
    const icoord by[4] = {parent.iy0, parent.iy0, my, my};
    for (int k = 0; k < 4; ++k) {
        cell c;
        c.id = long(cells_.size());
        c.parent = id;
        c.level = parent.level + 1;
        c.ix0 = bx[k];
        c.iy0 = by[k];
        c.ix1 = c.ix0 + (parent.ix1 - parent.ix0) / 2;
        c.iy1 = c.iy0 + (parent.iy1 - parent.iy0) / 2;
        kids[k] = c.id;
        cells_.push_back(c);
    }
    cells_[id].leaf = false;
    cells_[id].child = kids;
    return kids;
}

long cartesian_mesh::root_at(icoord ix, icoord iy) const {
    if (ix < 0 || iy < 0) return -1;
    icoord i = ix / UNIT, j = iy / UNIT;
    if (i >= nx_ || j >= ny_) return -1;
    return root_grid_[size_t(j) * nx_ + i];
}

void cartesian_mesh::collect_in_box(long id, icoord x0, icoord y0, icoord x1, icoord y1,
                                    std::vector<long>& out) const {
    const cell& c = cells_[id];
    if (c.ix0 > x1 || x0 > c.ix1 || c.iy0 > y1 || y0 > c.iy1) return;
    if (c.leaf) {
        out.push_back(c.id);
        return;
    }
    for (long k : c.child) collect_in_box(k, x0, y0, x1, y1, out);
}

std::vector<long> cartesian_mesh::leaves_touching_box(icoord x0, icoord y0, icoord x1, icoord y1) const {
    std::vector<long> out;
    icoord i0 = std::max<icoord>(0, (x0 == 0 ? 0 : (x0 - 1)) / UNIT);
    icoord j0 = std::max<icoord>(0, (y0 == 0 ? 0 : (y0 - 1)) / UNIT);
    icoord i1 = x1 / UNIT, j1 = y1 / UNIT;
    for (icoord j = j0; j <= j1 && j < ny_; ++j)
        for (icoord i = i0; i <= i1 && i < nx_; ++i) {
            long r = root_grid_[size_t(j) * nx_ + i];
            if (r >= 0) collect_in_box(r, x0, y0, x1, y1, out);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<long> cartesian_mesh::leaves_touching(long id) const {
    const cell& c = cells_[id];
    auto out = leaves_touching_box(c.ix0, c.iy0, c.ix1, c.iy1);
    out.erase(std::remove(out.begin(), out.end(), id), out.end());
    return out;
}

std::vector<long> cartesian_mesh::side_neighbors(long id, int side) const {
    const cell& c = cells_[id];
    icoord x0, y0, x1, y1;
    switch (side) {
    case 0: x0 = c.ix0; x1 = c.ix1; y0 = y1 = c.iy0; break;
    case 1: x0 = x1 = c.ix1; y0 = c.iy0; y1 = c.iy1; break;
    case 2: x0 = c.ix0; x1 = c.ix1; y0 = y1 = c.iy1; break;
    default: x0 = x1 = c.ix0; y0 = c.iy0; y1 = c.iy1; break;
    }
    std::vector<long> out;
    for (long n : leaves_touching_box(x0, y0, x1, y1)) {
        if (n == id) continue;
        const cell& o = cells_[n];
        bool overlap = (side % 2 == 0) ? (std::min(c.ix1, o.ix1) > std::max(c.ix0, o.ix0))
                                       : (std::min(c.iy1, o.iy1) > std::max(c.iy0, o.iy0));
        bool on_line = (side == 0 && o.iy1 == c.iy0) || (side == 2 && o.iy0 == c.iy1) ||
                       (side == 1 && o.ix0 == c.ix1) || (side == 3 && o.ix1 == c.ix0);
        if (overlap && on_line) out.push_back(n);
    }
    return out;
}

std::vector<long> cartesian_mesh::neighborhood(long id, int j) const {
    std::set<long> s{id};
    for (int layer = 0; layer < j; ++layer) {
        std::set<long> next = s;
        for (long k : s)
            for (long n : leaves_touching(k)) next.insert(n);
        s.swap(next);
    }
    return std::vector<long>(s.begin(), s.end());
}

long cartesian_mesh::leaf_at(const vec2& p) const {
    double fx = (p.x - ox_) / hx_, fy = (p.y - oy_) / hy_;
    icoord ix = icoord(std::floor(fx * double(UNIT)));
    icoord iy = icoord(std::floor(fy * double(UNIT)));
    ix = std::clamp<icoord>(ix, 0, icoord(nx_) * UNIT - 1);
    iy = std::clamp<icoord>(iy, 0, icoord(ny_) * UNIT - 1);
    long id = root_at(ix, iy);
    if (id < 0) return -1;
    while (!cells_[id].leaf) {
        const cell& c = cells_[id];
        icoord mx = (c.ix0 + c.ix1) / 2, my = (c.iy0 + c.iy1) / 2;
        int k = (ix >= mx ? 1 : 0) + (iy >= my ? 2 : 0);
        id = c.child[k];
    }
    return id;
}

long cartesian_mesh::enforce_kmesh() {
    long count = 0;
    std::deque<long> queue;
    for (const cell& c : cells_)
        if (c.leaf) queue.push_back(c.id);
    while (!queue.empty()) {
        long id = queue.front();
        queue.pop_front();
        if (!cells_[id].leaf) continue;
        int lv = cells_[id].level;
        for (int s = 0; s < 4; ++s) {
            for (long n : side_neighbors(id, s)) {
                if (cells_[n].level < lv - 1) {
                    auto kids = refine(n);
                    ++count;
                    for (long k : kids) queue.push_back(k);
                    queue.push_back(id);
                }
            }
        }
    }
    return count;
}

bool cartesian_mesh::is_balanced() const {
    for (const cell& c : cells_) {
        if (!c.leaf) continue;
        for (int s = 0; s < 4; ++s)
            for (long n : side_neighbors(c.id, s))
                if (std::abs(cells_[n].level - c.level) > 1) return false;
    }
    return true;
}

void cartesian_mesh::serialize(std::ostream& os, const std::unordered_map<long, std::string>* type_tag) const {
    os << "# cutfem mesh: one leaf per line `id level x0 y0 x1 y1 type`\n";
    auto ls = leaves();
    for (long id : ls) {
        rect b = bounds(id);
        std::string tag = "-";
        if (type_tag) {
            auto it = type_tag->find(id);
            if (it != type_tag->end()) tag = it->second;
        }
        os << id << ' ' << level(id) << ' ' << b.x0 << ' ' << b.y0 << ' ' << b.x1 << ' ' << b.y1 << ' ' << tag
           << '\n';
    }
    os << "# neighbors: `id side neighbor_ids...`\n";
    for (long id : ls) {
        for (int s = 0; s < 4; ++s) {
            auto ns = side_neighbors(id, s);
            if (ns.empty()) continue;
            os << id << ' ' << s;
            for (long n : ns) os << ' ' << n;
            os << '\n';
        }
    }
}

} // namespace cutfem
