#pragma once

#include <string>
#include <vector>

#include "aplab/field.hpp"

namespace aplab {

// A complex-valued function on Z/qZ, stored as its full value table.
struct TraceTable {
  CtxPtr ctx;
  std::vector<cplx> values;  // length exactly q
  std::string label;

  std::uint64_t q() const { return ctx->q(); }
  const cplx& at(std::uint64_t n) const { return values[n]; }
};

// Normalized hyper-Kloosterman sum Kl_d(n; q), computed by enumerating the
// d-1 free unit variables. Oracle-grade: guarded by q^(d-1) <= 10^7.
cplx kl_brute(unsigned d, std::uint64_t n, const PrimeContext& ctx);

// Full Kl_d table built level by level from Kl_{d-1} (O(d q^2)).
TraceTable kl_table_recursive(unsigned d, const CtxPtr& ctx);

// Full Kl_d table in O(d q log q): units reindexed by discrete log turn the
// defining sum into a d-fold cyclic convolution of length q-1.
TraceTable kl_table_fft(unsigned d, const CtxPtr& ctx);

// Unitary Fourier transform on Z/qZ: Khat(n) = q^{-1/2} sum_x K(x) e(nx/q).
TraceTable fourier_zq(const TraceTable& table);

// Normalized Gauss sum eps_chi = q^{-1/2} sum_{x unit} chi(x) e(x/q).
cplx gauss_sum(const DirichletCharacter& chi);

// All q-1 Gauss sums in one transform; entry j corresponds to chi_j.
std::vector<cplx> gauss_sums_all(const CtxPtr& ctx);

// max over residues mtilde of
//   | Fourier(Kl_4(a l .))(mtilde) - (delta_{(mtilde,q)=1} Kl_3(-a l / mtilde) + q^{-2}) |
double verify_kl4_hat(const CtxPtr& ctx, std::uint64_t a, std::uint64_t l,
                      const TraceTable* kl4 = nullptr, const TraceTable* kl3 = nullptr);

// max over units m of
//   | sum_{chi != chi_0} conj(chi)(m) eps_chi^4 - (phi(q) q^{-1/2} Kl_4(m) - q^{-2}) |
double gauss_spectral_check(const CtxPtr& ctx, const TraceTable* kl4 = nullptr);

// Correlation sum C_a(mtilde, l1, l2; q)
//   = q^{-1/2} sum_{x unit} Kl_4(a l1 x) conj(Kl_4(a l2 x)) e(x mtilde / q).
cplx correlation_sum(const CtxPtr& ctx, std::uint64_t a, std::uint64_t mtilde,
                     std::uint64_t l1, std::uint64_t l2, const TraceTable* kl4 = nullptr);

// All residues mtilde at once (one length-q transform).
std::vector<cplx> correlation_row(const CtxPtr& ctx, std::uint64_t a, std::uint64_t l1,
                                  std::uint64_t l2, const TraceTable* kl4 = nullptr);

std::string trace_table_csv(const TraceTable& table);

}  // namespace aplab
