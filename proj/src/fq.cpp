#include "hdf/fq.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace hdf {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// ---- raw polynomial arithmetic over F_p on coefficient vectors ----
// Used only at context-construction time (irreducibility scan) and for
// inversion, so clarity over speed.

using Vec = std::vector<std::uint32_t>;

std::uint64_t inv_mod_p(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on integers
    std::int64_t t = 0, newt = 1;
    std::int64_t r = (std::int64_t)p, newr = (std::int64_t)(a % p);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (r != 1) throw DivisionByZero("inverse of a non-unit mod p");
    if (t < 0) t += (std::int64_t)p;
    return (std::uint64_t)t;
}

int deg(const Vec& a) {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i]) return (int)i;
    return -1;
}

void trim(Vec& a) { a.resize((std::size_t)(deg(a) + 1)); }

Vec mul(const Vec& a, const Vec& b, std::uint64_t p) {
    if (deg(a) < 0 || deg(b) < 0) return {};
    Vec r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (std::uint32_t)((r[i + j] + (std::uint64_t)a[i] * b[j]) % p);
    }
    trim(r);
    return r;
}

Vec mod(Vec a, const Vec& m, std::uint64_t p) {
    int dm = deg(m);
    if (dm < 0) throw DivisionByZero("reduction modulo the zero polynomial");
    std::uint64_t linv = inv_mod_p(m[(std::size_t)dm], p);
    for (int i = deg(a); i >= dm; --i) {
        std::uint64_t c = a[(std::size_t)i];
        if (!c) continue;
        std::uint64_t f = c * linv % p;
        for (int j = 0; j <= dm; ++j) {
            std::uint64_t sub = f * m[(std::size_t)j] % p;
            std::uint64_t cur = a[(std::size_t)(i - dm + j)];
            a[(std::size_t)(i - dm + j)] = (std::uint32_t)((cur + p - sub) % p);
        }
    }
    trim(a);
    return a;
}

Vec mulmod(const Vec& a, const Vec& b, const Vec& m, std::uint64_t p) {
    return mod(mul(a, b, p), m, p);
}

Vec powmod(Vec base, std::uint64_t e, const Vec& m, std::uint64_t p) {
    Vec r{1};
    base = mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = mulmod(r, base, m, p);
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Vec gcd_poly(Vec a, Vec b, std::uint64_t p) {
    while (deg(b) >= 0) {
        Vec r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    // normalize monic
    int d = deg(a);
    if (d >= 0 && a[(std::size_t)d] != 1) {
        std::uint64_t s = inv_mod_p(a[(std::size_t)d], p);
        for (auto& c : a) c = (std::uint32_t)(c * s % p);
    }
    return a;
}

// X^{p^j} mod m
Vec frob_power(unsigned j, const Vec& m, std::uint64_t p) {
    Vec t{0, 1}; // X
    for (unsigned i = 0; i < j; ++i)
        t = powmod(t, p, m, p);
    return t;
}

// Rabin irreducibility test for a monic m of degree k over F_p.
bool is_irreducible(const Vec& m, unsigned k, std::uint64_t p) {
    // X^{p^k} == X mod m
    Vec xk = frob_power(k, m, p);
    if (!(xk.size() == 2 && xk[0] == 0 && xk[1] == 1)) return false;
    // gcd(X^{p^{k/q}} - X, m) == 1 for each prime q | k
    unsigned rem = k;
    std::vector<unsigned> prime_divs;
    for (unsigned q = 2; q * q <= rem; ++q) {
        if (rem % q == 0) {
            prime_divs.push_back(q);
            while (rem % q == 0) rem /= q;
        }
    }
    if (rem > 1) prime_divs.push_back(rem);
    for (unsigned q : prime_divs) {
        Vec h = frob_power(k / q, m, p);
        // h - X
        if (h.size() < 2) h.resize(2, 0);
        h[1] = (std::uint32_t)((h[1] + p - 1) % p);
        trim(h);
        Vec g = gcd_poly(m, h, p);
        if (deg(g) != 0) return false;
    }
    return true;
}

std::mutex g_registry_mutex;
std::map<std::pair<std::uint32_t, unsigned>, std::shared_ptr<const FieldCtx>>&
registry() {
    static std::map<std::pair<std::uint32_t, unsigned>,
                    std::shared_ptr<const FieldCtx>> r;
    return r;
}

} // namespace

FieldCtx::FieldCtx(std::uint32_t p, unsigned k, std::vector<std::uint32_t> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
    order_ = BigUint::power(p_, k_);
    BigUint t = order_;
    t.sub_small(1);
    order_minus1_half_ = t;
    order_minus1_half_.halve();
    two_adic_t_ = t;
    while (!two_adic_t_.is_odd()) {
        two_adic_t_.halve();
        ++two_adic_s_;
    }
    order_u64_ = order_.fits_u64() ? std::optional<std::uint64_t>(order_.to_u64())
                                   : std::nullopt;
}

std::shared_ptr<const FieldCtx> build_extension(std::uint32_t p, unsigned k) {
    if (p < 3 || !is_prime_u64(p)) throw NotPrime("p must be an odd prime");
    if (p > kMaxP) throw TooLarge("characteristic above 2^20");
    if (k < 1 || k > kMaxDegree) throw TooLarge("extension degree out of range");

    {
        std::lock_guard<std::mutex> lock(g_registry_mutex);
        auto it = registry().find({p, k});
        if (it != registry().end()) return it->second;
    }

    // Scan monic degree-k polynomials by increasing integer code.
    Vec m(k + 1, 0);
    m[k] = 1;
    std::uint64_t code = 0;
    std::shared_ptr<FieldCtx> ctx;
    while (true) {
        std::uint64_t c = code;
        for (unsigned i = 0; i < k; ++i) {
            m[i] = (std::uint32_t)(c % p);
            c /= p;
        }
        if (c != 0) throw ConstructionError("no irreducible found in scan");
        if (k == 1 || is_irreducible(m, k, p)) {
            ctx = std::shared_ptr<FieldCtx>(new FieldCtx(p, k, m));
            break;
        }
        ++code;
    }

    // Precompute the least quadratic non-residue (Euler criterion).
    {
        Fq one = ctx->one();
        std::uint64_t idx = 2;
        while (true) {
            Fq cand = ctx->element_from_index(idx);
            if (!cand.is_zero()) {
                Fq chi = cand.pow(ctx->order_minus1_half_);
                if (!(chi == one)) {
                    ctx->non_residue_ = std::make_unique<Fq>(cand);
                    break;
                }
            }
            ++idx;
        }
    }

    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto [it, inserted] = registry().emplace(std::make_pair(p, k), ctx);
    return it->second;
}

Fq FieldCtx::zero() const { return Fq(this); }

Fq FieldCtx::one() const {
    Fq r(this);
    r.c_[0] = 1;
    return r;
}

Fq FieldCtx::element_from_index(std::uint64_t idx) const {
    Fq r(this);
    for (unsigned i = 0; i < k_; ++i) {
        r.c_[i] = (std::uint32_t)(idx % p_);
        idx /= p_;
    }
    if (idx != 0) throw BadInput("element index out of range");
    return r;
}

Fq FieldCtx::from_int(std::uint64_t v) const {
    Fq r(this);
    r.c_[0] = (std::uint32_t)(v % p_);
    return r;
}

Fq FieldCtx::from_coeffs(const std::vector<std::uint64_t>& c) const {
    if (c.size() > k_) throw BadInput("too many coefficients for this field");
    Fq r(this);
    for (std::size_t i = 0; i < c.size(); ++i)
        r.c_[i] = (std::uint32_t)(c[i] % p_);
    return r;
}

const Fq& FieldCtx::non_residue() const {
    return *non_residue_;
}

Fq Fq::inv() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    std::uint64_t p = ctx_->p_;
    if (ctx_->k_ == 1) {
        Fq r(ctx_);
        r.c_[0] = (std::uint32_t)inv_mod_p(c_[0], p);
        return r;
    }
    // extended Euclid in F_p[t] against the modulus
    Vec a(ctx_->modulus_);
    Vec b(c_.begin(), c_.begin() + ctx_->k_);
    trim(b);
    Vec t0{}, t1{1};
    while (deg(b) > 0) {
        // divide a by b
        Vec q(a.size(), 0), r(a);
        int db = deg(b);
        std::uint64_t lead_inv = inv_mod_p(b[(std::size_t)db], p);
        for (int i = deg(r); i >= db; --i) {
            std::uint64_t co = r[(std::size_t)i] * lead_inv % p;
            if (!co) continue;
            q[(std::size_t)(i - db)] = (std::uint32_t)co;
            for (int j = 0; j <= db; ++j) {
                std::uint64_t sub = co * b[(std::size_t)j] % p;
                std::uint64_t cur = r[(std::size_t)(i - db + j)];
                r[(std::size_t)(i - db + j)] = (std::uint32_t)((cur + p - sub) % p);
            }
        }
        trim(r);
        // (a, b) <- (b, r);  (t0, t1) <- (t1, t0 - q t1)
        Vec qt = mul(q, t1, p);
        Vec nt(std::max(t0.size(), qt.size()), 0);
        for (std::size_t i = 0; i < nt.size(); ++i) {
            std::uint64_t x = i < t0.size() ? t0[i] : 0;
            std::uint64_t y = i < qt.size() ? qt[i] : 0;
            nt[i] = (std::uint32_t)((x + p - y % p) % p);
        }
        trim(nt);
        a = std::move(b);
        b = std::move(r);
        t0 = std::move(t1);
        t1 = std::move(nt);
    }
    if (deg(b) != 0) throw DivisionByZero("element not invertible");
    std::uint64_t s = inv_mod_p(b[0], p);
    Fq out(ctx_);
    for (std::size_t i = 0; i < t1.size() && i < ctx_->k_; ++i)
        out.c_[(unsigned)i] = (std::uint32_t)(t1[i] * s % p);
    return out;
}

Fq Fq::pow(std::uint64_t e) const {
    Fq r = ctx_->one();
    Fq base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

Fq Fq::pow(const BigUint& e) const {
    if (e.is_zero()) return ctx_->one();
    Fq r = ctx_->one();
    for (unsigned i = e.bit_length(); i-- > 0;) {
        r = r * r;
        if (e.bit(i)) r = r * *this;
    }
    return r;
}

Fq Fq::frobenius() const {
    if (ctx_->k_ == 1) return *this;
    return pow((std::uint64_t)ctx_->p_);
}

Fq sqrt_tonelli(const Fq& a) {
    const FieldCtx* ctx = a.ctx();
    const BigUint& t = ctx->two_adic_t_;
    unsigned s = ctx->two_adic_s_;
    Fq one = ctx->one();

    Fq c = ctx->non_residue().pow(t);
    BigUint t_plus1_half = t;
    // (t+1)/2 for odd t equals t/2 rounded up; halve() floors, so add back.
    t_plus1_half.halve();
    Fq r = a.pow(t_plus1_half) * a; // a^{(t+1)/2} = a^{(t-1)/2} * a
    Fq tt = a.pow(t);
    unsigned m = s;
    while (!(tt == one)) {
        Fq probe = tt;
        unsigned i = 0;
        while (!(probe == one)) {
            probe = probe * probe;
            ++i;
            if (i == m) throw Inconclusive("sqrt of a non-square slipped through");
        }
        Fq b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = b * b;
        m = i;
        c = b * b;
        tt = tt * c;
        r = r * b;
    }
    return r;
}

std::optional<Fq> sqrt_in_field(const Fq& a) {
    const FieldCtx* ctx = a.ctx();
    if (a.is_zero()) return a;
    if (ctx->order_u64() && *ctx->order_u64() <= 10000) {
        // small field: exhaustive scan in canonical order already yields the
        // canonical (least) root
        std::uint64_t q = *ctx->order_u64();
        for (std::uint64_t i = 0; i < q; ++i) {
            Fq s = ctx->element_from_index(i);
            if (s * s == a) return s;
        }
        return std::nullopt;
    }
    // Euler criterion, then Tonelli-Shanks.
    BigUint h = ctx->order();
    h.sub_small(1);
    h.halve();
    if (!(a.pow(h) == ctx->one())) return std::nullopt;
    Fq r = sqrt_tonelli(a);
    Fq neg = -r;
    return r.less(neg) ? r : neg;
}

std::string Fq::to_string() const {
    if (ctx_->k_ == 1) return std::to_string(c_[0]);
    std::ostringstream os;
    os << '[';
    for (unsigned i = 0; i < ctx_->k_; ++i) {
        if (i) os << ',';
        os << c_[i];
    }
    os << ']';
    return os.str();
}

} // namespace hdf
