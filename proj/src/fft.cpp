#include "nvscatter/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nv::fft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<int> factorize(int n) {
    std::vector<int> f;
    // radix-4 first where possible: fewer passes than two radix-2 stages
    while (n % 4 == 0) { f.push_back(4); n /= 4; }
    while (n % 2 == 0) { f.push_back(2); n /= 2; }
    while (n % 3 == 0) { f.push_back(3); n /= 3; }
    for (int p = 5; p * p <= n; p += 2)
        while (n % p == 0) { f.push_back(p); n /= p; }
    if (n > 1) f.push_back(n);
    return f;
}

thread_local std::vector<cx> t_scratch;

cx* scratch(std::size_t n) {
    if (t_scratch.size() < n) t_scratch.resize(n);
    return t_scratch.data();
}

}  // namespace

Plan::Plan(int n) : n_(n), factors_(factorize(n)) {
    if (n < 1) throw std::invalid_argument("fft: length must be positive");
    w_.resize(n);
    winv_.resize(n);
    for (int j = 0; j < n; ++j) {
        const double a = -kTwoPi * j / n;
        w_[j] = {std::cos(a), std::sin(a)};
        winv_[j] = std::conj(w_[j]);
    }
}

void Plan::inverse(const cx* in, cx* out) const {
    exec(in, out, winv_.data());
    const double s = 1.0 / n_;
    for (int j = 0; j < n_; ++j) out[j] *= s;
}

void Plan::exec(const cx* in, cx* out, const cx* table) const {
    if (n_ == 1) { out[0] = in[0]; return; }
    rec(n_, 1, in, out, factors_.data(), table);
}

// Decimation-in-time: n = r·m, sub-DFTs of the r decimated sequences land in
// y[q·m .. q·m+m), then X[c·m + k] = Σ_q W_r^{qc}·(W_n^{qk}·y[q·m+k]).
void Plan::rec(int n, int stride, const cx* x, cx* y, const int* factor, const cx* table) const {
    const int r = *factor;
    const int m = n / r;
    if (m == 1) {
        if (r == 1) { y[0] = x[0]; return; }
        // small direct DFT
        const int tw = n_ / r;
        for (int c = 0; c < r; ++c) {
            cx acc = x[0];
            for (int q = 1; q < r; ++q) acc += x[q * stride] * table[((long long)q * c % r) * tw];
            y[c] = acc;
        }
        return;
    }
    for (int q = 0; q < r; ++q) rec(m, stride * r, x + q * stride, y + q * m, factor + 1, table);

    const int tw = n_ / n;  // W_n^a = table[a·tw], a < n
    switch (r) {
        case 2:
            for (int k = 0; k < m; ++k) {
                const cx a = y[k];
                const cx b = y[m + k] * table[(std::size_t)k * tw];
                y[k] = a + b;
                y[m + k] = a - b;
            }
            break;
        case 4:
            for (int k = 0; k < m; ++k) {
                const cx a = y[k];
                const cx b = y[m + k] * table[(std::size_t)k * tw];
                const cx c = y[2 * m + k] * table[(std::size_t)2 * k * tw];
                const cx d = y[3 * m + k] * table[(std::size_t)3 * k * tw];
                const cx apc = a + c, amc = a - c;
                const cx bpd = b + d, bmd = b - d;
                // -i·(b-d) for the forward table; the conjugate table flips the sign
                // of every twiddle, and W_4 = table[n_/4] keeps signs consistent.
                const cx j_bmd = table[n_ / 4] * bmd;
                y[k] = apc + bpd;
                y[m + k] = amc + j_bmd;
                y[2 * m + k] = apc - bpd;
                y[3 * m + k] = amc - j_bmd;
            }
            break;
        case 3: {
            const cx w31 = table[n_ / 3];
            const cx w32 = table[2 * (n_ / 3)];
            for (int k = 0; k < m; ++k) {
                const cx a = y[k];
                const cx b = y[m + k] * table[(std::size_t)k * tw];
                const cx c = y[2 * m + k] * table[(std::size_t)2 * k * tw];
                y[k] = a + b + c;
                y[m + k] = a + w31 * b + w32 * c;
                y[2 * m + k] = a + w32 * b + w31 * c;
            }
            break;
        }
        default: {
            const int twr = n_ / r;
            cx t[16];
            std::vector<cx> tbig;
            cx* tp = t;
            if (r > 16) { tbig.resize(r); tp = tbig.data(); }
            for (int k = 0; k < m; ++k) {
                for (int p = 0; p < r; ++p) tp[p] = y[p * m + k] * table[(std::size_t)p * k * tw];
                for (int c = 0; c < r; ++c) {
                    cx acc = tp[0];
                    for (int p = 1; p < r; ++p) acc += tp[p] * table[((long long)p * c % r) * twr];
                    y[c * m + k] = acc;
                }
            }
            break;
        }
    }
}

const Plan& plan(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Plan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Plan>(n)).first;
    return *it->second;
}

namespace {

template <bool Forward>
void transform2d(int n, cx* data) {
    const Plan& p = plan(n);
    cx* s = scratch(2 * (std::size_t)n);
    cx* in = s;
    cx* out = s + n;
    for (int row = 0; row < n; ++row) {
        cx* r = data + (std::size_t)row * n;
        if constexpr (Forward) p.forward(r, out); else p.inverse(r, out);
        std::copy(out, out + n, r);
    }
    for (int col = 0; col < n; ++col) {
        for (int row = 0; row < n; ++row) in[row] = data[(std::size_t)row * n + col];
        if constexpr (Forward) p.forward(in, out); else p.inverse(in, out);
        for (int row = 0; row < n; ++row) data[(std::size_t)row * n + col] = out[row];
    }
}

}  // namespace

void forward2d(int n, cx* data) { transform2d<true>(n, data); }
void inverse2d(int n, cx* data) { transform2d<false>(n, data); }

}  // namespace nv::fft
