#include "dhl/lattice.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>

#include "dhl/errors.hpp"

namespace dhl::lattice {

namespace {

void check_letter(const LatticeParams& params, Letter l) {
    if (l.branch < 1 || l.branch > params.b || l.segment < 1 || l.segment > params.s)
        throw AddressError("letter out of range");
}

}  // namespace

// --- EdgeAddress -----------------------------------------------------------

std::uint64_t EdgeAddress::index(const LatticeParams& params) const {
    std::uint64_t idx = 0;
    std::uint64_t bs = std::uint64_t(params.b) * params.s;
    for (const Letter& l : word) {
        check_letter(params, l);
        idx = idx * bs + std::uint64_t(l.branch - 1) * params.s + std::uint64_t(l.segment - 1);
    }
    return idx;
}

EdgeAddress EdgeAddress::from_index(const LatticeParams& params, int level, std::uint64_t index) {
    std::vector<Letter> w(level);
    std::uint64_t bs = std::uint64_t(params.b) * params.s;
    for (int k = level - 1; k >= 0; --k) {
        std::uint64_t t = index % bs;
        index /= bs;
        w[k] = Letter{int(t / params.s) + 1, int(t % params.s) + 1};
    }
    if (index != 0) throw AddressError("from_index: index out of range for level");
    return EdgeAddress(std::move(w));
}

BigRational EdgeAddress::measure(const LatticeParams& params) const {
    return BigRational(1, ipow(BigInt(params.b) * params.s, word.size()));
}

EdgeAddress EdgeAddress::parent() const {
    if (word.empty()) throw AddressError("parent of the whole lattice");
    EdgeAddress p = *this;
    p.word.pop_back();
    return p;
}

bool EdgeAddress::is_ancestor_of(const EdgeAddress& other) const {
    if (word.size() > other.word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i)
        if (!(word[i] == other.word[i])) return false;
    return true;
}

std::string EdgeAddress::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += '/';
        out += std::to_string(word[i].branch) + "." + std::to_string(word[i].segment);
    }
    return out;
}

EdgeAddress EdgeAddress::parse(const std::string& text) {
    EdgeAddress e;
    if (text.empty()) return e;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '/')) {
        auto dot = part.find('.');
        if (dot == std::string::npos) throw AddressError("edge letter needs i.j: " + part);
        Letter l;
        l.branch = std::stoi(part.substr(0, dot));
        l.segment = std::stoi(part.substr(dot + 1));
        if (l.branch < 1 || l.segment < 1) throw AddressError("edge letter out of range: " + part);
        e.word.push_back(l);
    }
    return e;
}

// --- VertexAddress -----------------------------------------------------------

VertexAddress VertexAddress::interior(EdgeAddress prefix, int branch, int cut) {
    if (branch < 1 || cut < 1) throw AddressError("interior vertex needs branch >= 1, cut >= 1");
    return {Interior{std::move(prefix), branch, cut}};
}

int VertexAddress::generation() const {
    if (is_root()) return 0;
    return std::get<Interior>(v).prefix.level() + 1;
}

std::string VertexAddress::to_string() const {
    if (is_root()) return std::get<Root>(v) == Root::A ? "A" : "B";
    const auto& iv = std::get<Interior>(v);
    return iv.prefix.to_string() + ":" + std::to_string(iv.branch) + "," + std::to_string(iv.cut);
}

VertexAddress VertexAddress::parse(const std::string& text) {
    if (text == "A") return root_a();
    if (text == "B") return root_b();
    auto colon = text.rfind(':');
    if (colon == std::string::npos) throw AddressError("vertex needs A, B, or <prefix>:i,c");
    auto comma = text.find(',', colon);
    if (comma == std::string::npos) throw AddressError("vertex needs <prefix>:i,c");
    EdgeAddress prefix = EdgeAddress::parse(text.substr(0, colon));
    int branch = std::stoi(text.substr(colon + 1, comma - colon - 1));
    int cut = std::stoi(text.substr(comma + 1));
    return interior(std::move(prefix), branch, cut);
}

// --- counting -------------------------------------------------------------

BigInt edge_count(const LatticeParams& params, int n) {
    if (n < 0) throw std::invalid_argument("edge_count: n >= 0");
    return ipow(BigInt(params.b) * params.s, std::uint64_t(n));
}

BigInt path_count(const LatticeParams& params, int n) {
    if (n < 0) throw std::invalid_argument("path_count: n >= 0");
    return ipow(BigInt(params.b), params.decision_count(n));
}

// --- projective coordinate -------------------------------------------------

BigRational projective_coordinate(const LatticeParams& params, const VertexAddress& v) {
    if (v.is_root())
        return std::get<VertexAddress::Root>(v.v) == VertexAddress::Root::A ? BigRational(0)
                                                                            : BigRational(1);
    const auto& iv = std::get<VertexAddress::Interior>(v.v);
    if (iv.branch > params.b || iv.cut > params.s - 1) throw AddressError("vertex out of range");
    BigRational lo = projective_interval(params, iv.prefix).first;
    int g = iv.prefix.level() + 1;
    return lo + BigRational(iv.cut, ipow(BigInt(params.s), std::uint64_t(g)));
}

std::pair<BigRational, BigRational> projective_interval(const LatticeParams& params,
                                                        const EdgeAddress& e) {
    BigRational lo = 0;
    BigInt spow = 1;
    for (const Letter& l : e.word) {
        check_letter(params, l);
        spow *= params.s;
        lo += BigRational(l.segment - 1, spow);
    }
    return {lo, lo + BigRational(1, spow)};
}

// --- similitudes ------------------------------------------------------------

EdgeAddress similitude(const LatticeParams& params, Letter letter, const EdgeAddress& e) {
    check_letter(params, letter);
    EdgeAddress out;
    out.word.reserve(e.word.size() + 1);
    out.word.push_back(letter);
    out.word.insert(out.word.end(), e.word.begin(), e.word.end());
    return out;
}

VertexAddress similitude(const LatticeParams& params, Letter letter, const VertexAddress& v) {
    check_letter(params, letter);
    if (!v.is_root()) {
        const auto& iv = std::get<VertexAddress::Interior>(v.v);
        return VertexAddress::interior(similitude(params, letter, iv.prefix), iv.branch, iv.cut);
    }
    if (std::get<VertexAddress::Root>(v.v) == VertexAddress::Root::A) {
        // Image is the left endpoint of cell (i, j).
        if (letter.segment == 1) return VertexAddress::root_a();
        return VertexAddress::interior(EdgeAddress{}, letter.branch, letter.segment - 1);
    }
    if (letter.segment == params.s) return VertexAddress::root_b();
    return VertexAddress::interior(EdgeAddress{}, letter.branch, letter.segment);
}

// --- metric ------------------------------------------------------------------

std::pair<VertexAddress, VertexAddress> bond_endpoints(const EdgeAddress& e,
                                                       const LatticeParams& params) {
    // Left endpoint: the first trailing letter with segment > 1 names it;
    // all-1 tails resolve to A. Symmetrically on the right with segment < s.
    VertexAddress left = VertexAddress::root_a();
    for (int k = e.level() - 1; k >= 0; --k) {
        if (e.word[k].segment > 1) {
            EdgeAddress prefix;
            prefix.word.assign(e.word.begin(), e.word.begin() + k);
            left = VertexAddress::interior(std::move(prefix), e.word[k].branch,
                                           e.word[k].segment - 1);
            break;
        }
    }
    VertexAddress right = VertexAddress::root_b();
    for (int k = e.level() - 1; k >= 0; --k) {
        if (e.word[k].segment < params.s) {
            EdgeAddress prefix;
            prefix.word.assign(e.word.begin(), e.word.begin() + k);
            right = VertexAddress::interior(std::move(prefix), e.word[k].branch, e.word[k].segment);
            break;
        }
    }
    return {std::move(left), std::move(right)};
}

struct MetricGraph::BfsCache {
    std::mutex mu;
    std::map<std::uint32_t, std::vector<std::uint32_t>> dist;
};

MetricGraph::MetricGraph(const LatticeParams& params, int n) : params_(params), n_(n) {
    // Vertex ids: A=0, B=1, then interior vertices generation by generation.
    generation_offset_.assign(std::size_t(n) + 2, 0);
    std::uint64_t total = 2;
    std::uint64_t per_prefix = std::uint64_t(params.b) * (params.s - 1);
    for (int g = 1; g <= n; ++g) {
        generation_offset_[g] = total;
        total += params.cells(g - 1) * per_prefix;
    }
    generation_offset_[std::size_t(n) + 1] = total;
    if (total > std::numeric_limits<std::uint32_t>::max())
        throw SizeCapError("MetricGraph: vertex count exceeds 32-bit ids");
    adjacency_.assign(total, {});

    std::uint64_t bonds = params.cells(n);
    for (std::uint64_t c = 0; c < bonds; ++c) {
        EdgeAddress e = EdgeAddress::from_index(params, n, c);
        auto [l, r] = bond_endpoints(e, params);
        std::uint32_t il = vertex_id(l), ir = vertex_id(r);
        adjacency_[il].push_back(ir);
        adjacency_[ir].push_back(il);
    }
    cache_ = std::make_shared<BfsCache>();
}

std::uint32_t MetricGraph::vertex_id(const VertexAddress& v) const {
    if (v.is_root())
        return std::get<VertexAddress::Root>(v.v) == VertexAddress::Root::A ? 0u : 1u;
    const auto& iv = std::get<VertexAddress::Interior>(v.v);
    int g = v.generation();
    if (g > n_) throw AddressError("vertex generation exceeds graph level");
    if (iv.branch > params_.b || iv.cut > params_.s - 1) throw AddressError("vertex out of range");
    std::uint64_t per_prefix = std::uint64_t(params_.b) * (params_.s - 1);
    std::uint64_t id = generation_offset_[g] + iv.prefix.index(params_) * per_prefix +
                       std::uint64_t(iv.branch - 1) * (params_.s - 1) + std::uint64_t(iv.cut - 1);
    return std::uint32_t(id);
}

std::uint32_t MetricGraph::hop_distance(std::uint32_t from, std::uint32_t to) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->dist.find(from);
    if (it == cache_->dist.end()) {
        auto sw = cache_->dist.find(to);
        if (sw != cache_->dist.end()) return sw->second[from];
        std::vector<std::uint32_t> d(adjacency_.size(), std::numeric_limits<std::uint32_t>::max());
        std::queue<std::uint32_t> q;
        d[from] = 0;
        q.push(from);
        while (!q.empty()) {
            std::uint32_t u = q.front();
            q.pop();
            for (std::uint32_t w : adjacency_[u])
                if (d[w] == std::numeric_limits<std::uint32_t>::max()) {
                    d[w] = d[u] + 1;
                    q.push(w);
                }
        }
        it = cache_->dist.emplace(from, std::move(d)).first;
    }
    return it->second[to];
}

std::shared_ptr<const MetricGraph> MetricGraph::get(const LatticeParams& params, int n) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const MetricGraph>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(params.b, params.s, n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::shared_ptr<const MetricGraph>(new MetricGraph(params, n)))
                 .first;
    return it->second;
}

BigRational metric_distance(const LatticeParams& params, const VertexAddress& v1,
                            const VertexAddress& v2, int n) {
    if (v1.generation() > n || v2.generation() > n)
        throw AddressError("metric_distance: level too small to contain a vertex");
    auto graph = MetricGraph::get(params, n);
    std::uint32_t hops = graph->hop_distance(graph->vertex_id(v1), graph->vertex_id(v2));
    return BigRational(hops, ipow(BigInt(params.s), std::uint64_t(n)));
}

// --- dimension ----------------------------------------------------------------

double lattice_dimension(const LatticeParams& params) {
    return 1.0 + std::log(double(params.b)) / std::log(double(params.s));
}

}  // namespace dhl::lattice
