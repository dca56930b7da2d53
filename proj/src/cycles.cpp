#include "lcr/cycles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "lcr/errors.hpp"
#include "lcr/numeric.hpp"

namespace lcr::cycles {

int fast_count_fault_injection = 0;

CyclePattern::CyclePattern(std::vector<EdgeType> c) : codes(std::move(c)) {
    if (codes.size() < 3) throw std::invalid_argument("cycle patterns need length >= 3");
}

std::string CyclePattern::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < codes.size(); ++k) {
        if (k) s += ',';
        s += to_code(codes[k]);
    }
    return s;
}

CyclePattern CyclePattern::parse(const std::string& text) {
    std::vector<EdgeType> codes;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty() && tok.front() == ' ') tok.erase(0, tok.find_first_not_of(' '));
        if (!tok.empty() && tok.back() == ' ') tok.erase(tok.find_last_not_of(' ') + 1);
        codes.push_back(edge_type_from_code(tok));
    }
    return CyclePattern(std::move(codes));
}

CyclePattern CyclePattern::rotated(int r) const {
    const int m = length();
    r = ((r % m) + m) % m;
    std::vector<EdgeType> out(m);
    for (int k = 0; k < m; ++k) out[k] = codes[(k + r) % m];
    return CyclePattern(std::move(out));
}

CyclePattern CyclePattern::reversed() const {
    const int m = length();
    std::vector<EdgeType> out(m);
    for (int k = 0; k < m; ++k) out[k] = transpose(codes[m - 1 - k]);
    return CyclePattern(std::move(out));
}

CyclePattern CyclePattern::canonical() const {
    CyclePattern best = *this;
    const CyclePattern rev = reversed();
    for (int r = 0; r < length(); ++r) {
        for (const CyclePattern* base : {this, &rev}) {
            CyclePattern cand = base->rotated(r);
            if (cand.codes < best.codes) best = cand;
        }
    }
    return best;
}

CycleMonomial monomial(const CyclePattern& pattern) {
    const int m = pattern.length();
    CycleMonomial mon;
    mon.mu_exp.assign(m, 0);
    mon.nu_exp.assign(m, 0);
    for (int k = 0; k < m; ++k) {
        const int next = (k + 1) % m;
        switch (pattern.codes[k]) {
            case EdgeType::e00: break;
            case EdgeType::e10:
                ++mon.mu_exp[k];
                ++mon.nu_exp[next];
                break;
            case EdgeType::e01:
                ++mon.mu_exp[next];
                ++mon.nu_exp[k];
                break;
            case EdgeType::e11:
                ++mon.mu_exp[k];
                ++mon.nu_exp[k];
                ++mon.mu_exp[next];
                ++mon.nu_exp[next];
                ++mon.rho_power;
                break;
        }
    }
    return mon;
}

double CycleMonomial::evaluate(const model::PlrQuantities& plr, double rho,
                               const std::vector<int>& nodes) const {
    double v = std::exp(rho * rho_power);
    for (std::size_t t = 0; t < mu_exp.size(); ++t) {
        for (int e = 0; e < mu_exp[t]; ++e) v *= plr.mu[nodes[t]];
        for (int e = 0; e < nu_exp[t]; ++e) v *= plr.nu[nodes[t]];
    }
    return v;
}

std::optional<int> is_cancellation_pair(const CyclePattern& a, const CyclePattern& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("cancellation pairs need equal lengths");
    const CycleMonomial ma = monomial(a);
    const CycleMonomial mb = monomial(b);
    if (!ma.same_mu_nu(mb)) return std::nullopt;
    const int c0 = ma.rho_power - mb.rho_power;
    if (c0 <= 0) return std::nullopt;
    return c0;
}

std::vector<CancellationPair> pair_search(int m) {
    if (m < 3 || m > 8) throw CapacityError("pair search supports 3 <= m <= 8");
    const std::size_t total = static_cast<std::size_t>(1) << (2 * m);  // 4^m

    std::vector<CyclePattern> patterns;
    patterns.reserve(total);
    std::vector<int> rho_power(total);
    std::map<std::vector<int>, std::vector<std::size_t>> buckets;
    for (std::size_t p = 0; p < total; ++p) {
        std::vector<EdgeType> codes(m);
        std::size_t v = p;
        for (int k = 0; k < m; ++k) {
            codes[k] = static_cast<EdgeType>(v & 3);
            v >>= 2;
        }
        patterns.emplace_back(std::move(codes));
        CycleMonomial mon = monomial(patterns.back());
        rho_power[p] = mon.rho_power;
        std::vector<int> key = std::move(mon.mu_exp);
        key.insert(key.end(), mon.nu_exp.begin(), mon.nu_exp.end());
        buckets[std::move(key)].push_back(p);
    }

    // Group matching pairs into isomorphism classes; the representative is the
    // lexicographically smallest member, so it is itself a cancelling pair.
    struct ClassInfo {
        CyclePattern a;
        CyclePattern b;
        int c0;
    };
    std::map<std::string, ClassInfo> classes;
    for (const auto& [key, members] : buckets) {
        for (std::size_t pa : members) {
            for (std::size_t pb : members) {
                const int c0 = rho_power[pa] - rho_power[pb];
                if (c0 <= 0) continue;
                const CyclePattern& a = patterns[pa];
                const CyclePattern& b = patterns[pb];
                const std::string ckey = a.canonical().to_string() + "|" +
                                         b.canonical().to_string();
                auto it = classes.find(ckey);
                if (it == classes.end()) {
                    classes.emplace(ckey, ClassInfo{a, b, c0});
                } else if (std::make_pair(a.codes, b.codes) <
                           std::make_pair(it->second.a.codes, it->second.b.codes)) {
                    it->second.a = a;
                    it->second.b = b;
                }
            }
        }
    }

    std::vector<CancellationPair> out;
    out.reserve(classes.size());
    for (auto& [ckey, info] : classes)
        out.push_back(CancellationPair{info.a, info.b, info.c0, 0});
    std::sort(out.begin(), out.end(), [](const CancellationPair& x, const CancellationPair& y) {
        return std::make_tuple(x.c0, x.a.codes, x.b.codes) <
               std::make_tuple(y.c0, y.a.codes, y.b.codes);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].class_id = static_cast<int>(i + 1);
    return out;
}

std::vector<CancellationPair> quad_pairs() {
    return {
        CancellationPair{CyclePattern::parse("11,00,01,00"), CyclePattern::parse("10,10,00,10"),
                         1, 1},
        CancellationPair{CyclePattern::parse("11,00,11,00"), CyclePattern::parse("01,01,01,01"),
                         2, 2},
        CancellationPair{CyclePattern::parse("11,10,11,00"), CyclePattern::parse("01,11,01,01"),
                         1, 3},
    };
}

CancellationPair default_pair() { return quad_pairs()[0]; }

CancellationPair quad_pair(int id) {
    if (id < 1 || id > 3) throw std::invalid_argument("pair id must be 1, 2 or 3");
    return quad_pairs()[id - 1];
}

namespace {

constexpr std::int64_t kBruteTupleBudget = 38416;     // 14^4
constexpr std::int64_t kExpectedTupleBudget = 12960000;  // 60^4

std::int64_t tuple_count(int n, int m) {
    std::int64_t c = 1;
    for (int k = 0; k < m; ++k) {
        c *= n;
        if (c > (std::int64_t(1) << 60) / n) return std::int64_t(1) << 60;
    }
    return c;
}

}  // namespace

std::int64_t brute_force_count(const graph::DirectedGraph& g, const CyclePattern& pattern) {
    const int n = g.n();
    const int m = pattern.length();
    if (tuple_count(std::max(n, 1), m) > kBruteTupleBudget)
        throw CapacityError("brute-force enumeration limited to n^m <= 14^4");

    // Dense state lookup; n is tiny here.
    std::vector<EdgeType> st(static_cast<std::size_t>(n) * n, EdgeType::e00);
    for (int i = 0; i < n; ++i) {
        for (int j : g.out_oneway(i)) st[static_cast<std::size_t>(i) * n + j] = EdgeType::e10;
        for (int j : g.in_oneway(i)) st[static_cast<std::size_t>(i) * n + j] = EdgeType::e01;
        for (int j : g.mutual(i)) st[static_cast<std::size_t>(i) * n + j] = EdgeType::e11;
    }

    std::vector<int> nodes(m);
    std::vector<char> used(n, 0);
    std::int64_t count = 0;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == m) {
            if (st[static_cast<std::size_t>(nodes[m - 1]) * n + nodes[0]] ==
                pattern.codes[m - 1])
                ++count;
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            if (depth > 0 &&
                st[static_cast<std::size_t>(nodes[depth - 1]) * n + v] !=
                    pattern.codes[depth - 1])
                continue;
            used[v] = 1;
            nodes[depth] = v;
            self(self, depth + 1);
            used[v] = 0;
        }
    };
    rec(rec, 0);
    return count;
}

double expected_count(const model::ModelParams& params, const CyclePattern& pattern) {
    const int n = params.n();
    const int m = pattern.length();
    if (tuple_count(n, m) > kExpectedTupleBudget)
        throw CapacityError("exact expected counts limited to n^m <= 60^4");

    const model::PlrQuantities q = plr(params);
    // Dense per-type probability tables.
    std::array<std::vector<double>, 4> omega;
    for (EdgeType t : kAllEdgeTypes)
        omega[static_cast<int>(t)].assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (EdgeType t : kAllEdgeTypes)
                omega[static_cast<int>(t)][static_cast<std::size_t>(i) * n + j] =
                    model::omega_entry(q, params.rho(), t, i, j);
        }

    std::vector<int> nodes(m);
    std::vector<char> used(n, 0);
    KahanSum total;
    auto rec = [&](auto&& self, int depth, double prod) -> void {
        if (depth == m) {
            const auto& last = omega[static_cast<int>(pattern.codes[m - 1])];
            total.add(prod * last[static_cast<std::size_t>(nodes[m - 1]) * n + nodes[0]]);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            double p = prod;
            if (depth > 0) {
                const auto& tab = omega[static_cast<int>(pattern.codes[depth - 1])];
                p *= tab[static_cast<std::size_t>(nodes[depth - 1]) * n + v];
            }
            used[v] = 1;
            nodes[depth] = v;
            self(self, depth + 1, p);
            used[v] = 0;
        }
    };
    rec(rec, 0, 1.0);
    return total.value();
}

// ---------------------------------------------------------------------------
// Fast counting: expand every 00 factor as (J - T) with T = I + S, where S is
// the any-edge indicator. Terms containing J split into rank-one contractions
// (vector chains); the remaining term is a trace of four sparse factors.
// ---------------------------------------------------------------------------

namespace {

enum class Kind : unsigned char { P, Pt, R, S, T, I, J };

Kind kind_of(EdgeType t) {
    switch (t) {
        case EdgeType::e10: return Kind::P;
        case EdgeType::e01: return Kind::Pt;
        case EdgeType::e11: return Kind::R;
        default: return Kind::J;  // complement; resolved during expansion
    }
}

Kind transpose_kind(Kind k) {
    if (k == Kind::P) return Kind::Pt;
    if (k == Kind::Pt) return Kind::P;
    return k;
}

struct SparseCtx {
    const graph::DirectedGraph* g;
    int n;
    std::vector<std::vector<int>> srow;  // union of the three neighbour lists
};

SparseCtx make_ctx(const graph::DirectedGraph& g) {
    SparseCtx ctx;
    ctx.g = &g;
    ctx.n = g.n();
    ctx.srow.resize(ctx.n);
    for (int i = 0; i < ctx.n; ++i) {
        auto& row = ctx.srow[i];
        row.reserve(g.out_oneway(i).size() + g.in_oneway(i).size() + g.mutual(i).size());
        row.insert(row.end(), g.out_oneway(i).begin(), g.out_oneway(i).end());
        row.insert(row.end(), g.in_oneway(i).begin(), g.in_oneway(i).end());
        row.insert(row.end(), g.mutual(i).begin(), g.mutual(i).end());
        std::sort(row.begin(), row.end());
    }
    return ctx;
}

template <class F>
void for_row(const SparseCtx& ctx, Kind k, int i, F f) {
    switch (k) {
        case Kind::P:
            for (int j : ctx.g->out_oneway(i)) f(j);
            break;
        case Kind::Pt:
            for (int j : ctx.g->in_oneway(i)) f(j);
            break;
        case Kind::R:
            for (int j : ctx.g->mutual(i)) f(j);
            break;
        case Kind::S:
            for (int j : ctx.srow[i]) f(j);
            break;
        case Kind::T:
            f(i);
            for (int j : ctx.srow[i]) f(j);
            break;
        case Kind::I:
            f(i);
            break;
        case Kind::J: std::abort();
    }
}

std::size_t row_size(const SparseCtx& ctx, Kind k, int i) {
    switch (k) {
        case Kind::P: return ctx.g->out_oneway(i).size();
        case Kind::Pt: return ctx.g->in_oneway(i).size();
        case Kind::R: return ctx.g->mutual(i).size();
        case Kind::S: return ctx.srow[i].size();
        case Kind::T: return ctx.srow[i].size() + 1;
        case Kind::I: return 1;
        case Kind::J: std::abort();
    }
    return 0;
}

// 1' M1 M2 ... Mk 1 by repeated row-weighted accumulation.
std::int64_t chain_scalar(const SparseCtx& ctx, const std::vector<Kind>& factors) {
    std::vector<std::int64_t> u(ctx.n, 1), v(ctx.n);
    for (Kind k : factors) {
        std::fill(v.begin(), v.end(), 0);
        for (int i = 0; i < ctx.n; ++i) {
            const std::int64_t w = u[i];
            if (w == 0) continue;
            for_row(ctx, k, i, [&](int j) { v[j] += w; });
        }
        u.swap(v);
    }
    std::int64_t s = 0;
    for (std::int64_t x : u) s += x;
    return s;
}

// trace(M1 M2 M3 M4) = sum_{j,l} (M2 M3)_{jl} (M4 M1)_{lj}; per row j both
// two-step neighbourhoods are scattered into dense scratch rows and cleared in
// full, so the cost is Theta(n^2 + two-path work).
std::int64_t quad_trace(const SparseCtx& ctx, Kind m1, Kind m2, Kind m3, Kind m4) {
    const int n = ctx.n;
    const Kind m1t = transpose_kind(m1);
    const Kind m4t = transpose_kind(m4);
    std::vector<int> a(n, 0), b(n, 0);
    std::vector<int> touched;
    touched.reserve(256);
    std::int64_t tr = 0;
    for (int j = 0; j < n; ++j) {
        if (row_size(ctx, m2, j) == 0 || row_size(ctx, m1t, j) == 0) continue;
        touched.clear();
        for_row(ctx, m2, j, [&](int k) {
            for_row(ctx, m3, k, [&](int l) {
                if (a[l]++ == 0) touched.push_back(l);
            });
        });
        for_row(ctx, m1t, j, [&](int i) { for_row(ctx, m4t, i, [&](int l) { ++b[l]; }); });
        for (int l : touched) tr += static_cast<std::int64_t>(a[l]) * b[l];
        std::fill(a.begin(), a.end(), 0);
        std::fill(b.begin(), b.end(), 0);
    }
    return tr;
}

// A trace over all index tuples equals the distinct-tuple sum only when any
// coincident pair of opposite tour indices forces an inconsistent dyad state.
bool trace_valid(const CyclePattern& p) {
    const auto& c = p.codes;
    const bool i1_eq_i3 = (c[1] == transpose(c[0])) && (c[3] == transpose(c[2]));
    const bool i2_eq_i4 = (c[2] == transpose(c[1])) && (c[0] == transpose(c[3]));
    return !i1_eq_i3 && !i2_eq_i4;
}

}  // namespace

std::int64_t fast_count(const graph::DirectedGraph& g, const CyclePattern& pattern) {
    if (pattern.length() != 4)
        throw std::invalid_argument("fast counting is specialized to length-4 patterns");
    if (!trace_valid(pattern))
        throw std::invalid_argument(
            "pattern admits coincident-index tuples; use brute_force_count");

    const SparseCtx ctx = make_ctx(g);
    std::vector<int> compl_pos;
    std::array<Kind, 4> base{};
    for (int k = 0; k < 4; ++k) {
        base[k] = kind_of(pattern.codes[k]);
        if (pattern.codes[k] == EdgeType::e00) compl_pos.push_back(k);
    }

    const int nc = static_cast<int>(compl_pos.size());
    std::int64_t total = 0;
    for (int mask = 0; mask < (1 << nc); ++mask) {
        std::array<Kind, 4> items = base;
        int sign = 1;
        for (int t = 0; t < nc; ++t) {
            if (mask & (1 << t)) {
                items[compl_pos[t]] = Kind::T;
                sign = -sign;
            } else {
                items[compl_pos[t]] = Kind::J;
            }
        }

        std::vector<int> jpos;
        for (int k = 0; k < 4; ++k)
            if (items[k] == Kind::J) jpos.push_back(k);

        std::int64_t value;
        if (jpos.empty()) {
            value = quad_trace(ctx, items[0], items[1], items[2], items[3]);
            if (mask == (1 << nc) - 1) value += fast_count_fault_injection;
        } else {
            value = 1;
            const int r = static_cast<int>(jpos.size());
            for (int t = 0; t < r; ++t) {
                const int from = jpos[t];
                const int to = jpos[(t + 1) % r];
                std::vector<Kind> gap;
                for (int k = (from + 1) % 4; k != to; k = (k + 1) % 4) gap.push_back(items[k]);
                value *= chain_scalar(ctx, gap);
            }
        }
        total += sign * value;
    }
    return total;
}

PairCounts fast_count_pair(const graph::DirectedGraph& g, const CancellationPair& pair) {
    return PairCounts{fast_count(g, pair.a), fast_count(g, pair.b)};
}

}  // namespace lcr::cycles
