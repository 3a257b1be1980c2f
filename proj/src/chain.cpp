#include "cutfem/chain.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cutfem {

leaf_classification classify_leaves(const cartesian_mesh& mesh, const interface_set& interface,
                                    double delta0) {
    leaf_classification cls;
    for (long id : mesh.leaves()) {
        rect b = mesh.bounds(id);
        int hits = 0;
        for (int c = 0; c < int(interface.components.size()); ++c) {
            const interface_curve& curve = *interface.components[c];
            try {
                cut_topology t = intersect_cell(curve, b, id, delta0);
                if (t.is_cut()) {
                    ++hits;
                    if (hits > 1) {
                        cls.topo.erase(id);
                        cls.component.erase(id);
                        cls.non_transversal.push_back(id);
                        break;
                    }
                    cls.topo[id] = t;
                    cls.component[id] = c;
                }
            } catch (const non_transversal_cut&) {
                cls.topo.erase(id);
                cls.component.erase(id);
                cls.non_transversal.push_back(id);
                break;
            }
        }
    }
    std::sort(cls.non_transversal.begin(), cls.non_transversal.end());
    cls.non_transversal.erase(std::unique(cls.non_transversal.begin(), cls.non_transversal.end()),
                              cls.non_transversal.end());
    return cls;
}

std::vector<chain> extract_chains(const cartesian_mesh& mesh, const interface_set& interface,
                                  const leaf_classification& cls) {
    if (!cls.non_transversal.empty())
        throw non_transversal_cut("extract_chains: unresolved non-transversal cells");

    std::vector<chain> chains;
    for (int c = 0; c < int(interface.components.size()); ++c) {
        const interface_curve& curve = *interface.components[c];
        std::vector<long> ids;
        for (auto& [id, comp] : cls.component)
            if (comp == c) ids.push_back(id);
        if (ids.empty()) continue;

        std::sort(ids.begin(), ids.end(), [&](long a, long b) {
            return cls.topo.at(a).t_in < cls.topo.at(b).t_in;
        });

        chain ch;
        ch.component = c;
        ch.closed = curve.closed();

        // continuity: consecutive arc spans must meet, and consecutive cells
        // must share a side (corner threading is a refinement signal)
        double tol = 0.0;
        for (long id : ids) tol = std::max(tol, 1e-7 * (cls.topo.at(id).t_out - cls.topo.at(id).t_in));
        size_t n = ids.size();
        for (size_t k = 0; k + 1 < n; ++k) {
            const auto& a = cls.topo.at(ids[k]);
            const auto& b = cls.topo.at(ids[k + 1]);
            if (std::abs(a.t_out - b.t_in) > tol + 1e-12)
                throw non_transversal_cut("extract_chains: arc spans do not meet along the curve");
        }
        if (ch.closed && n >= 2) {
            const auto& last = cls.topo.at(ids[n - 1]);
            const auto& first = cls.topo.at(ids[0]);
            double wrap = last.t_out - curve.period();
            if (std::abs(wrap - first.t_in) > tol + 1e-12)
                throw non_transversal_cut("extract_chains: closed chain does not wrap");
        }
        for (size_t k = 0; k + 1 < n || (ch.closed && k < n && n > 1); ++k) {
            long a = ids[k], b = ids[(k + 1) % n];
            if (a == b) break;
            auto nb = mesh.side_neighbors(a, 0);
            bool adjacent = false;
            for (int s = 0; s < 4 && !adjacent; ++s)
                for (long m : mesh.side_neighbors(a, s))
                    if (m == b) adjacent = true;
            if (!adjacent)
                throw non_transversal_cut("extract_chains: consecutive interface cells share no side");
            if (k + 1 == n) break;
        }

        // rotate closed chains so the start element contains the parameter origin
        size_t start = 0;
        if (ch.closed && n > 1) {
            double origin = curve.t_min() + curve.period();
            for (size_t k = 0; k < n; ++k) {
                const auto& t = cls.topo.at(ids[k]);
                if (t.t_out > origin - 1e-12) {
                    start = k;
                    break;
                }
            }
            if (cls.topo.at(ids[start]).t_out <= origin - 1e-12) start = 0;
            std::rotate(ids.begin(), ids.begin() + start, ids.end());
        }

        ch.elements = ids;
        for (long id : ids) ch.types.push_back(cls.topo.at(id).type);
        chains.push_back(std::move(ch));
    }
    return chains;
}

namespace {

// side-adjacency connectivity of a set of leaves
bool side_connected(const cartesian_mesh& mesh, const std::vector<long>& set) {
    if (set.size() <= 1) return true;
    std::set<long> in(set.begin(), set.end());
    std::set<long> seen;
    std::vector<long> stack{set.front()};
    seen.insert(set.front());
    while (!stack.empty()) {
        long id = stack.back();
        stack.pop_back();
        for (int s = 0; s < 4; ++s)
            for (long n : mesh.side_neighbors(id, s))
                if (in.count(n) && !seen.count(n)) {
                    seen.insert(n);
                    stack.push_back(n);
                }
    }
    return seen.size() == in.size();
}

} // namespace

std::vector<admissibility_violation> check_admissible(const cartesian_mesh& mesh,
                                                      const interface_set& interface, const chain& ch,
                                                      const leaf_classification& cls) {
    std::vector<admissibility_violation> out;
    std::set<long> chain_set(ch.elements.begin(), ch.elements.end());

    // Rule 1: uniform size in S(K)_2
    for (long K : ch.elements) {
        int lv = mesh.level(K);
        std::vector<long> bad;
        for (long L : mesh.neighborhood(K, 2))
            if (mesh.level(L) != lv) bad.push_back(L);
        if (!bad.empty()) {
            bad.insert(bad.begin(), K);
            out.push_back({1, bad, "S(K)_2 size not uniform"});
        }
    }

    // Rule 2: a fully-interior side must be the full side of an uncut same-size neighbor
    for (long K : ch.elements) {
        const cut_topology& topo = cls.topo.at(K);
        const interface_curve& curve = *interface.components[size_t(cls.component.at(K))];
        rect b = mesh.bounds(K);
        for (int s = 0; s < 4; ++s) {
            bool cut_side = topo.cuts[0].side == s || topo.cuts[1].side == s;
            if (cut_side) continue;
            auto [a, bb] = b.side(s);
            int side_a = curve.side(a), side_b = curve.side(bb), side_m = curve.side(0.5 * (a + bb));
            if (!(side_a == side_b && side_b == side_m)) continue; // closure not within one subdomain
            auto nbrs = mesh.side_neighbors(K, s);
            if (nbrs.empty()) continue; // domain boundary side
            bool ok = nbrs.size() == 1 && mesh.level(nbrs[0]) == mesh.level(K) && !cls.is_cut(nbrs[0]);
            if (ok) {
                // neighbor must lie in the same subdomain
                int ns = interface.side(mesh.bounds(nbrs[0]).center());
                ok = ns == side_m;
            }
            if (!ok) {
                std::vector<long> cells{K};
                cells.insert(cells.end(), nbrs.begin(), nbrs.end());
                out.push_back({2, cells, "interior side not matched by an uncut same-size neighbor"});
            }
        }
    }

    // Rule 3: uncut cells neighbor at most two chain elements
    std::map<long, std::set<long>> uncut_touch;
    for (long K : ch.elements)
        for (int s = 0; s < 4; ++s)
            for (long n : mesh.side_neighbors(K, s))
                if (!cls.is_cut(n)) uncut_touch[n].insert(K);
    for (auto& [L, touch] : uncut_touch) {
        if (touch.size() > 2) {
            std::vector<long> cells{L};
            cells.insert(cells.end(), touch.begin(), touch.end());
            out.push_back({3, cells, "uncut cell neighbors more than two chain elements"});
        }
    }

    // Rule 4: interface elements in S(L)_j connected for non-interface L, j = 1,2
    std::set<long> candidates;
    for (long K : ch.elements)
        for (long L : mesh.neighborhood(K, 2))
            if (!cls.is_cut(L)) candidates.insert(L);
    for (long L : candidates) {
        for (int j = 1; j <= 2; ++j) {
            std::vector<long> cut_cells;
            for (long n : mesh.neighborhood(L, j))
                if (cls.is_cut(n)) cut_cells.push_back(n);
            if (cut_cells.size() > 1 && !side_connected(mesh, cut_cells)) {
                std::vector<long> cells{L};
                cells.insert(cells.end(), cut_cells.begin(), cut_cells.end());
                out.push_back({4, cells, "interface elements in S(K)_" + std::to_string(j) + " disconnected"});
            }
        }
    }
    return out;
}

} // namespace cutfem
