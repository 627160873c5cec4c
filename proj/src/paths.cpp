#include "dhl/paths.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "dhl/errors.hpp"

namespace dhl::paths {

namespace {

std::atomic<int> g_max_path_level{12};

// Subtree slot counts D(d) = (s^d - 1)/(s - 1) for the current walk.
struct TreeWalk {
    int s;
    std::vector<std::uint64_t> subtree;  // subtree[d] = slots in a depth-d subtree

    explicit TreeWalk(const LatticeParams& params, int depth) : s(params.s) {
        subtree.resize(std::size_t(depth) + 1);
        subtree[0] = 0;
        for (int d = 1; d <= depth; ++d) subtree[d] = 1 + std::uint64_t(s) * subtree[d - 1];
    }

    std::uint64_t child(std::uint64_t off, int depth, int seg0) const {
        return off + 1 + std::uint64_t(seg0) * subtree[depth - 1];
    }
};

}  // namespace

int max_path_level() { return g_max_path_level.load(); }
void set_max_path_level(int n) { g_max_path_level.store(n); }

CoarsePath::CoarsePath(LatticeParams params_, int level_, std::vector<std::uint8_t> choices_)
    : params(params_), level(level_), choices(std::move(choices_)) {
    if (level < 0) throw std::invalid_argument("CoarsePath: level >= 0");
    if (level > max_path_level()) throw SizeCapError("CoarsePath: level exceeds max_path_level()");
    if (choices.size() != params.decision_count(level))
        throw std::invalid_argument("CoarsePath: wrong decision vector length");
    for (auto c : choices)
        if (c < 1 || c > params.b) throw std::invalid_argument("CoarsePath: choice out of 1..b");
}

lattice::EdgeAddress CoarsePath::edge_at(std::uint64_t k) const {
    std::uint64_t sn = params.segments(level);
    if (k < 1 || k > sn) throw std::out_of_range("edge_at: k out of 1..s^n");
    TreeWalk tw(params, level);
    std::vector<lattice::Letter> word(std::size_t(level), lattice::Letter{});
    std::uint64_t off = 0, kk = k - 1, block = sn;
    for (int d = level; d > 0; --d) {
        block /= params.s;
        int seg0 = int(kk / block);
        kk %= block;
        word[std::size_t(level - d)] = lattice::Letter{int(choices[off]), seg0 + 1};
        off = tw.child(off, d, seg0);
    }
    return lattice::EdgeAddress(std::move(word));
}

std::vector<std::uint64_t> CoarsePath::trace_indices() const {
    std::uint64_t bs = std::uint64_t(params.b) * params.s;
    TreeWalk tw(params, level);
    std::vector<std::uint64_t> out;
    out.reserve(params.segments(level));
    auto rec = [&](auto&& self, std::uint64_t off, int d, std::uint64_t base) -> void {
        if (d == 0) {
            out.push_back(base);
            return;
        }
        std::uint64_t i0 = choices[off] - 1;
        for (int j0 = 0; j0 < params.s; ++j0)
            self(self, tw.child(off, d, j0), d - 1, base * bs + i0 * params.s + std::uint64_t(j0));
    };
    rec(rec, 0, level, 0);
    return out;
}

CoarsePath CoarsePath::coarsen(int m) const {
    if (m < 0 || m > level) throw std::invalid_argument("coarsen: need 0 <= m <= level");
    TreeWalk src(params, level), dst(params, m);
    std::vector<std::uint8_t> out(params.decision_count(m));
    auto rec = [&](auto&& self, std::uint64_t so, int sd, std::uint64_t to, int td) -> void {
        if (td == 0) return;
        out[to] = choices[so];
        for (int j0 = 0; j0 < params.s; ++j0)
            self(self, src.child(so, sd, j0), sd - 1, dst.child(to, td, j0), td - 1);
    };
    rec(rec, 0, level, 0, m);
    return CoarsePath(params, m, std::move(out));
}

CoarsePath CoarsePath::refine(int N, SplitRng& rng) const {
    if (N < level) throw std::invalid_argument("refine: need N >= level");
    TreeWalk src(params, level), dst(params, N);
    std::vector<std::uint8_t> out(params.decision_count(N));
    auto fill_uniform = [&](auto&& self, std::uint64_t to, int td) -> void {
        if (td == 0) return;
        out[to] = std::uint8_t(1 + rng.uniform_int(std::uint32_t(params.b)));
        for (int j0 = 0; j0 < params.s; ++j0) self(self, dst.child(to, td, j0), td - 1);
    };
    auto rec = [&](auto&& self, std::uint64_t so, int sd, std::uint64_t to, int td) -> void {
        if (td == 0) return;
        if (sd == 0) {
            fill_uniform(fill_uniform, to, td);
            return;
        }
        out[to] = choices[so];
        for (int j0 = 0; j0 < params.s; ++j0)
            self(self, src.child(so, sd, j0), sd - 1, dst.child(to, td, j0), td - 1);
    };
    rec(rec, 0, level, 0, N);
    return CoarsePath(params, N, std::move(out));
}

BigRational CoarsePath::measure() const {
    return BigRational(1, lattice::path_count(params, level));
}

std::string CoarsePath::to_string() const {
    std::string out;
    if (params.b <= 9) {
        for (auto c : choices) out += char('0' + c);
    } else {
        for (std::size_t i = 0; i < choices.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(int(choices[i]));
        }
    }
    return out;
}

CoarsePath CoarsePath::parse(const LatticeParams& params, int level, const std::string& text) {
    std::vector<std::uint8_t> ch;
    if (params.b <= 9) {
        for (char c : text) {
            if (c < '1' || c > '9') throw std::invalid_argument("path digits must be 1..9");
            ch.push_back(std::uint8_t(c - '0'));
        }
    } else {
        std::size_t pos = 0;
        while (pos < text.size()) {
            auto comma = text.find(',', pos);
            if (comma == std::string::npos) comma = text.size();
            ch.push_back(std::uint8_t(std::stoi(text.substr(pos, comma - pos))));
            pos = comma + 1;
        }
    }
    return CoarsePath(params, level, std::move(ch));
}

std::uint64_t shared_bonds(const CoarsePath& p, const CoarsePath& q) {
    if (!(p.params == q.params) || p.level != q.level)
        throw std::invalid_argument("shared_bonds: params/level mismatch");
    TreeWalk tw(p.params, p.level);
    auto rec = [&](auto&& self, std::uint64_t off, int d) -> std::uint64_t {
        if (d == 0) return 1;  // same cell, one shared bond
        if (p.choices[off] != q.choices[off]) return 0;
        std::uint64_t total = 0;
        for (int j0 = 0; j0 < p.params.s; ++j0) total += self(self, tw.child(off, d, j0), d - 1);
        return total;
    };
    return rec(rec, 0, p.level);
}

CoarsePath sample_uniform_path(const LatticeParams& params, int n, SplitRng& rng) {
    std::vector<std::uint8_t> ch(params.decision_count(n));
    for (auto& c : ch) c = std::uint8_t(1 + rng.uniform_int(std::uint32_t(params.b)));
    return CoarsePath(params, n, std::move(ch));
}

std::vector<CoarsePath> enumerate_paths(const LatticeParams& params, int n) {
    std::uint64_t slots = params.decision_count(n);
    BigInt total = lattice::path_count(params, n);
    if (total > BigInt(1) << 24) throw SizeCapError("enumerate_paths: too many paths");
    std::vector<CoarsePath> out;
    out.reserve(total.convert_to<std::size_t>());
    std::vector<std::uint8_t> ch(slots, 1);
    for (;;) {
        out.push_back(CoarsePath(params, n, ch));
        std::size_t k = ch.size();
        while (k > 0 && ch[k - 1] == params.b) ch[--k] = 1;
        if (k == 0) break;
        ++ch[k - 1];
    }
    return out;
}

CoarsePath path_from_ordinal(const LatticeParams& params, int n, std::uint64_t ordinal) {
    std::uint64_t slots = params.decision_count(n);
    std::vector<std::uint8_t> ch(slots);
    for (std::uint64_t k = slots; k-- > 0;) {
        ch[k] = std::uint8_t(1 + ordinal % params.b);
        ordinal /= params.b;
    }
    if (ordinal != 0) throw std::out_of_range("path_from_ordinal: ordinal out of range");
    return CoarsePath(params, n, std::move(ch));
}

std::uint64_t path_ordinal(const CoarsePath& p) {
    std::uint64_t o = 0;
    for (auto c : p.choices) o = o * p.params.b + std::uint64_t(c - 1);
    return o;
}

CellSet::CellSet(LatticeParams params_, int level_, std::vector<lattice::EdgeAddress> cells_)
    : params(params_), level(level_), cells(std::move(cells_)) {
    for (const auto& c : cells)
        if (c.level() != level) throw std::invalid_argument("CellSet: cell level mismatch");
    std::sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) {
        return a.index(params) < b.index(params);
    });
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

namespace {

// Constraint view: cell suffixes plus an optional cylinder subtree.
struct CylView {
    const CoarsePath* sigma = nullptr;
    std::uint64_t off = 0;
    int depth = 0;  // remaining constrained depth
};

// Paths through the given suffix words inside a depth-d sub-diamond,
// optionally constrained to follow a cylinder's decisions on top.
// Every decision node is either forced (by a cell below it or by the
// cylinder) or free with b equally countable branches, so the count is a
// pure power of b once consistency holds.
BigInt count_rec(const LatticeParams& params, std::vector<const lattice::Letter*> suffixes, int d,
                 CylView cyl, TreeWalk* cyl_walk) {
    if (d == 0) return 1;
    if (suffixes.empty() && cyl.depth == 0)
        return ipow(BigInt(params.b), params.decision_count(d));

    int forced = 0;
    for (const lattice::Letter* w : suffixes) {
        if (forced == 0)
            forced = w->branch;
        else if (forced != w->branch)
            return 0;
    }
    if (cyl.depth > 0) {
        int cb = int(cyl.sigma->choices[cyl.off]);
        if (forced != 0 && forced != cb) return 0;
        forced = cb;
    }

    BigInt result = 1;  // node is forced: either a cell below it or the cylinder names the branch
    for (int j = 1; j <= params.s; ++j) {
        std::vector<const lattice::Letter*> sub;
        for (const lattice::Letter* w : suffixes)
            if (w->segment == j) sub.push_back(w + 1);
        CylView subcyl;
        if (cyl.depth > 0)
            subcyl = CylView{cyl.sigma, cyl_walk->child(cyl.off, cyl.depth, j - 1), cyl.depth - 1};
        result *= count_rec(params, std::move(sub), d - 1, subcyl, cyl_walk);
        if (result == 0) return 0;
    }
    return result;
}

std::vector<const lattice::Letter*> suffix_views(const CellSet& S) {
    std::vector<const lattice::Letter*> v;
    v.reserve(S.cells.size());
    for (const auto& c : S.cells)
        if (c.level() > 0) v.push_back(c.word.data());
    return v;
}

}  // namespace

BigInt count_paths_through(const CellSet& S) {
    return count_rec(S.params, suffix_views(S), S.level, CylView{}, nullptr);
}

BigInt count_paths_through_in_cylinder(const CellSet& S, const CoarsePath& cylinder) {
    if (!(S.params == cylinder.params) || cylinder.level > S.level)
        throw std::invalid_argument("count_paths_through_in_cylinder: cylinder level exceeds cell level");
    TreeWalk tw(S.params, cylinder.level);
    return count_rec(S.params, suffix_views(S), S.level,
                     CylView{&cylinder, 0, cylinder.level}, &tw);
}

CoarsePath sample_path_through(const CellSet& S, SplitRng& rng) {
    const LatticeParams& params = S.params;
    TreeWalk tw(params, S.level);
    std::vector<std::uint8_t> out(params.decision_count(S.level));

    auto rec = [&](auto&& self, std::vector<const lattice::Letter*> suffixes, std::uint64_t off,
                   int d) -> void {
        if (d == 0) return;
        int forced = 0;
        for (const lattice::Letter* w : suffixes) {
            if (forced == 0)
                forced = w->branch;
            else if (forced != w->branch)
                throw std::invalid_argument("sample_path_through: Gamma_S is empty");
        }
        out[off] = std::uint8_t(forced ? forced : 1 + rng.uniform_int(std::uint32_t(params.b)));
        for (int j = 1; j <= params.s; ++j) {
            std::vector<const lattice::Letter*> sub;
            for (const lattice::Letter* w : suffixes)
                if (w->segment == j) sub.push_back(w + 1);
            self(self, std::move(sub), tw.child(off, d, j - 1), d - 1);
        }
    };
    rec(rec, suffix_views(S), 0, S.level);
    return CoarsePath(params, S.level, std::move(out));
}

}  // namespace dhl::paths
