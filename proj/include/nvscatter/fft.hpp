#pragma once

#include <complex>
#include <vector>

namespace nv::fft {

using cx = std::complex<double>;

/// Unnormalized complex DFT plan for one transform length.
/// Forward computes X[k] = Σ_j x[j]·exp(−2πi jk/n); inverse applies the
/// conjugate kernel and divides by n. Factors of 2, 3, 4 and 5 get dedicated
/// butterflies; other prime factors fall back to a generic small DFT, so any
/// length works (grids in this project are 2^a·3^b).
class Plan {
public:
    explicit Plan(int n);

    int size() const { return n_; }

    /// out <- DFT(in); in and out must not alias; both length n.
    void forward(const cx* in, cx* out) const { exec(in, out, w_.data()); }
    void inverse(const cx* in, cx* out) const;

private:
    void exec(const cx* in, cx* out, const cx* table) const;
    void rec(int n, int stride, const cx* x, cx* y, const int* factor, const cx* table) const;

    int n_;
    std::vector<int> factors_;
    std::vector<cx> w_;      // w_[j] = exp(−2πi j/n)
    std::vector<cx> winv_;   // conjugate table
};

/// Shared per-length plan (cached, thread-safe).
const Plan& plan(int n);

/// In-place 2D transforms of an n×n row-major array (row index = x2, column
/// index = x1). Forward is unnormalized; inverse carries the 1/n² factor.
void forward2d(int n, cx* data);
void inverse2d(int n, cx* data);

}  // namespace nv::fft
