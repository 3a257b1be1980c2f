#include "cutfem/merge.hpp"

#include <algorithm>

namespace cutfem {

void merge_state::add_macro(macro_element m) {
    std::sort(m.leaves.begin(), m.leaves.end());
    size_t idx = macros.size();
    for (long id : m.leaves) {
        auto [it, fresh] = claim.emplace(id, idx);
        if (!fresh)
            throw merge_conflict("merge: leaf " + std::to_string(id) + " claimed twice");
    }
    macros.push_back(std::move(m));
}

namespace {

bool is_pass(cell_type t) { return t == cell_type::T2 || t == cell_type::T3; }

} // namespace

void merge_chain(const cartesian_mesh& mesh, const interface_curve& curve, const leaf_classification& cls,
                 const chain& ch, double delta0, merge_state& state) {
    if (!(delta0 > 0.0 && delta0 <= 0.2 + 1e-12))
        throw precondition_violated("merge_chain: delta0 must be in (0, 1/5]");
    size_t n = ch.length();
    if (n == 0) return;
    if (!ch.closed && n >= 2) {
        if (!is_pass(ch.types.front()) || !is_pass(ch.types.back()))
            throw precondition_violated("merge_chain: open chain endpoints must be pass elements");
    }

    std::vector<bool> done(n, false);
    auto type_at = [&](size_t i) { return ch.types[i % n]; };
    auto elem_at = [&](size_t i) { return ch.elements[i % n]; };

    auto emit = [&](int kind, const std::vector<size_t>& idx) {
        std::vector<long> cells;
        for (size_t i : idx) cells.push_back(elem_at(i));
        pattern_result r = apply_pattern(kind, cells, mesh, curve, cls, delta0);
        if (r.identity) {
            for (size_t i : idx) {
                macro_element m;
                m.bounds = mesh.bounds(elem_at(i));
                m.leaves = {elem_at(i)};
                m.pattern_kind = 0;
                m.component = ch.component;
                state.add_macro(std::move(m));
                done[i % n] = true;
            }
            return;
        }
        macro_element m;
        m.bounds = r.macro;
        m.leaves = r.absorbed;
        m.pattern_kind = kind;
        m.component = ch.component;
        state.add_macro(std::move(m));
        for (size_t i : idx) done[i % n] = true;
    };

    // ---- step 1: maximal runs of corner-cut (T1) elements, length >= 2 ----
    {
        std::vector<std::pair<size_t, size_t>> runs; // (start, length)
        if (ch.closed && n >= 2) {
            bool all_t1 = true;
            for (size_t i = 0; i < n; ++i) all_t1 = all_t1 && type_at(i) == cell_type::T1;
            if (all_t1) {
                runs.push_back({0, n});
            } else {
                // start scanning after a non-T1 element so runs never split across the wrap
                size_t s0 = 0;
                while (type_at(s0) == cell_type::T1) ++s0;
                size_t i = s0 + 1;
                while (i <= s0 + n) {
                    if (type_at(i) == cell_type::T1) {
                        size_t j = i;
                        while (j < s0 + n && type_at(j) == cell_type::T1) ++j;
                        runs.push_back({i, j - i});
                        i = j;
                    } else {
                        ++i;
                    }
                }
            }
        } else {
            size_t i = 0;
            while (i < n) {
                if (type_at(i) == cell_type::T1) {
                    size_t j = i;
                    while (j < n && type_at(j) == cell_type::T1) ++j;
                    runs.push_back({i, j - i});
                    i = j;
                } else {
                    ++i;
                }
            }
        }
        for (auto [start, len] : runs) {
            if (len < 2) continue;
            if (len % 2 == 0) {
                for (size_t k = 0; k + 1 < len; k += 2) emit(3, {start + k, start + k + 1});
            } else {
                for (size_t k = 0; k + 3 < len; k += 2) emit(3, {start + k, start + k + 1});
                emit(2, {start + len - 3, start + len - 2, start + len - 1});
            }
        }
    }

    // earliest-start-first scan over consecutive unmerged triples
    auto scan_triples = [&](auto&& matches, int kind) {
        if (n < 3) return;
        size_t last = ch.closed ? n : n - 2;
        for (size_t i = 0; i < last; ++i) {
            size_t a = i, b = i + 1, c = i + 2;
            if (done[a % n] || done[b % n] || done[c % n]) continue;
            if (matches(type_at(a), type_at(b), type_at(c))) emit(kind, {a, b, c});
        }
    };

    // ---- step 2: corner-pass-corner triples (strictly small pass middles) ----
    scan_triples(
        [&](cell_type a, cell_type b, cell_type c) {
            return a == cell_type::T1 && b == cell_type::T2 && c == cell_type::T1;
        },
        4);

    // ---- step 3: pass-corner-pass triples ----
    scan_triples(
        [&](cell_type a, cell_type b, cell_type c) {
            return is_pass(a) && b == cell_type::T1 && is_pass(c);
        },
        1);

    // ---- step 4: remaining pass elements; corner elements must all be merged ----
    for (size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        if (type_at(i) == cell_type::T1)
            throw pattern_mismatch("merge_chain: corner element left unmerged after step 3");
        if (type_at(i) == cell_type::T2) {
            emit(5, {i});
        } else {
            // T3 elements are large by definition: pass through
            macro_element m;
            m.bounds = mesh.bounds(elem_at(i));
            m.leaves = {elem_at(i)};
            m.pattern_kind = 0;
            m.component = ch.component;
            state.add_macro(std::move(m));
            done[i] = true;
        }
    }
}

induced_mesh build_induced_mesh(std::shared_ptr<cartesian_mesh> mesh, const interface_set& interface,
                                const leaf_classification& cls, const merge_state& state, double delta0,
                                int p) {
    induced_mesh im;
    im.base = mesh;
    im.interface = interface;
    im.delta0 = delta0;
    im.degree = p;

    // macros first (in creation order), then untouched leaves by id
    for (const macro_element& m : state.macros) {
        induced_element e;
        e.bounds = m.bounds;
        e.leaves = m.leaves;
        e.pattern_kind = m.pattern_kind;
        e.component = m.component;
        im.elements.push_back(std::move(e));
    }
    for (long id : mesh->leaves()) {
        if (state.claim.count(id)) continue;
        induced_element e;
        e.bounds = mesh->bounds(id);
        e.leaves = {id};
        e.pattern_kind = 0;
        if (cls.is_cut(id)) {
            // an interface leaf outside every chain macro: it is large (SELF)
            e.component = cls.component.at(id);
        }
        im.elements.push_back(std::move(e));
    }

    // ids, integer bounds, leaf map, cut metadata
    im.max_eta = 0.0;
    for (long i = 0; i < long(im.elements.size()); ++i) {
        induced_element& e = im.elements[i];
        e.id = i;
        e.ix0 = e.iy0 = std::numeric_limits<cartesian_mesh::icoord>::max();
        e.ix1 = e.iy1 = std::numeric_limits<cartesian_mesh::icoord>::min();
        for (long leaf : e.leaves) {
            const auto& c = mesh->at(leaf);
            e.ix0 = std::min(e.ix0, c.ix0);
            e.iy0 = std::min(e.iy0, c.iy0);
            e.ix1 = std::max(e.ix1, c.ix1);
            e.iy1 = std::max(e.iy1, c.iy1);
            auto [it, fresh] = im.leaf_to_element.emplace(leaf, i);
            if (!fresh) throw merge_conflict("build_induced_mesh: leaf in two induced elements");
        }
        bool any_cut = false;
        int comp = 0;
        for (long leaf : e.leaves)
            if (cls.is_cut(leaf)) {
                any_cut = true;
                comp = cls.component.at(leaf);
            }
        e.cut = any_cut;
        if (any_cut) {
            e.component = comp;
            const interface_curve& curve = *interface.components[comp];
            cut_topology topo = intersect_cell(curve, e.bounds, e.id, delta0);
            if (!topo.is_cut())
                throw non_transversal_cut("build_induced_mesh: macro classified uncut");
            e.geom = build_cut_geometry(curve, topo, e.bounds, p);
            im.max_eta = std::max(im.max_eta, e.geom->eta);
        } else {
            e.subdomain = interface.empty() ? 2 : interface.side(e.bounds.center());
        }
    }
    return im;
}

} // namespace cutfem
