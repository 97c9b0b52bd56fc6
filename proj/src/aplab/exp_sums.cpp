#include "aplab/exp_sums.hpp"

#include <cmath>
#include <sstream>

#include "aplab/fft.hpp"

namespace aplab {

namespace {

double kl_normalization(unsigned d, std::uint64_t q) {
  return std::pow(static_cast<double>(q), -0.5 * static_cast<double>(d - 1));
}

TraceTable kl1_table(const CtxPtr& ctx) {
  const std::uint64_t q = ctx->q();
  TraceTable t{ctx, std::vector<cplx>(q), "Kl1"};
  t.values[0] = 0.0;  // empty sum: no unit solution of x = 0
  for (std::uint64_t n = 1; n < q; ++n) t.values[n] = ctx->additive_char_u(n);
  return t;
}

}  // namespace

cplx kl_brute(unsigned d, std::uint64_t n, const PrimeContext& ctx) {
  require(d >= 1, errc::invalid_argument, "kl_brute: degree must be >= 1");
  const std::uint64_t q = ctx.q();
  double work = std::pow(static_cast<double>(q), static_cast<double>(d - 1));
  require(work <= 1e7, errc::resource_limit, "kl_brute: q^(d-1) enumeration exceeds 10^7");

  n %= q;
  if (d == 1) return n == 0 ? cplx{0.0, 0.0} : ctx.additive_char_u(n);
  if (n == 0) return {0.0, 0.0};  // a product of units is never 0

  // Odometer over the d-1 free unit variables; the last one is forced.
  std::vector<std::uint64_t> x(d - 1, 1);
  KahanSumC acc;
  for (;;) {
    std::uint64_t prod = 1, sum = 0;
    for (std::uint64_t xi : x) {
      prod = ctx.mul(prod, xi);
      sum += xi;
    }
    const std::uint64_t last = ctx.mul(n, ctx.inverse(prod));
    acc.add(ctx.additive_char_u((sum + last) % q));

    unsigned pos = 0;
    while (pos < d - 1) {
      if (++x[pos] < q) break;
      x[pos] = 1;
      ++pos;
    }
    if (pos == d - 1) break;
  }
  return acc.value() * kl_normalization(d, q);
}

TraceTable kl_table_recursive(unsigned d, const CtxPtr& ctx) {
  require(d >= 1, errc::invalid_argument, "kl_table_recursive: degree must be >= 1");
  const std::uint64_t q = ctx->q();
  TraceTable t = kl1_table(ctx);
  const double inv_sqrt_q = 1.0 / std::sqrt(static_cast<double>(q));
  for (unsigned level = 2; level <= d; ++level) {
    std::vector<cplx> next(q);
    next[0] = 0.0;
    for (std::uint64_t n = 1; n < q; ++n) {
      KahanSumC acc;
      for (std::uint64_t x = 1; x < q; ++x)
        acc.add(t.values[ctx->mul(n, ctx->inverse(x))] * ctx->additive_char_u(x));
      next[n] = acc.value() * inv_sqrt_q;
    }
    t.values = std::move(next);
  }
  t.label = "Kl" + std::to_string(d);
  return t;
}

TraceTable kl_table_fft(unsigned d, const CtxPtr& ctx) {
  require(d >= 1, errc::invalid_argument, "kl_table_fft: degree must be >= 1");
  const std::uint64_t q = ctx->q();
  std::vector<cplx> c(q - 1);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    c[k] = ctx->additive_char_u(x);  // c[k] = e(g^k / q)
    x = ctx->mul(x, ctx->generator());
  }
  std::vector<cplx> conv = fft::cyclic_power(c, d);

  TraceTable t{ctx, std::vector<cplx>(q), "Kl" + std::to_string(d)};
  t.values[0] = 0.0;
  const double scale = kl_normalization(d, q);
  x = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    t.values[x] = conv[k] * scale;
    x = ctx->mul(x, ctx->generator());
  }
  return t;
}

TraceTable fourier_zq(const TraceTable& table) {
  const std::uint64_t q = table.q();
  std::vector<cplx> hat = fft::dft(table.values, +1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  for (auto& z : hat) z *= scale;
  return TraceTable{table.ctx, std::move(hat), "fourier(" + table.label + ")"};
}

cplx gauss_sum(const DirichletCharacter& chi) {
  const PrimeContext& ctx = chi.context();
  const std::uint64_t q = ctx.q();
  KahanSumC acc;
  for (std::uint64_t x = 1; x < q; ++x)
    acc.add(chi(static_cast<std::int64_t>(x)) * ctx.additive_char_u(x));
  return acc.value() / std::sqrt(static_cast<double>(q));
}

std::vector<cplx> gauss_sums_all(const CtxPtr& ctx) {
  const std::uint64_t q = ctx->q();
  std::vector<cplx> c(q - 1);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    c[k] = ctx->additive_char_u(x);
    x = ctx->mul(x, ctx->generator());
  }
  // eps[j] = q^{-1/2} sum_k e(jk/(q-1)) e(g^k/q)
  std::vector<cplx> eps = fft::dft(c, +1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  for (auto& z : eps) z *= scale;
  return eps;
}

double verify_kl4_hat(const CtxPtr& ctx, std::uint64_t a, std::uint64_t l,
                      const TraceTable* kl4, const TraceTable* kl3) {
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a) && ctx->is_unit(l), errc::invalid_argument,
          "verify_kl4_hat: a and l must be units");
  TraceTable kl4_local, kl3_local;
  if (!kl4) {
    kl4_local = kl_table_fft(4, ctx);
    kl4 = &kl4_local;
  }
  if (!kl3) {
    kl3_local = kl_table_fft(3, ctx);
    kl3 = &kl3_local;
  }

  const std::uint64_t al = ctx->mul(a % q, l % q);
  TraceTable twisted{ctx, std::vector<cplx>(q), "Kl4-twisted"};
  for (std::uint64_t x = 0; x < q; ++x) twisted.values[x] = kl4->at(ctx->mul(al, x));
  TraceTable hat = fourier_zq(twisted);

  const double qm2 = 1.0 / (static_cast<double>(q) * static_cast<double>(q));
  double max_err = 0.0;
  for (std::uint64_t mt = 0; mt < q; ++mt) {
    cplx expected{qm2, 0.0};
    if (mt != 0) {
      const std::uint64_t arg = ctx->reduce(-static_cast<std::int64_t>(ctx->mul(al, ctx->inverse(mt))));
      expected += kl3->at(arg);
    }
    max_err = std::max(max_err, std::abs(hat.at(mt) - expected));
  }
  return max_err;
}

double gauss_spectral_check(const CtxPtr& ctx, const TraceTable* kl4) {
  const std::uint64_t q = ctx->q();
  TraceTable kl4_local;
  if (!kl4) {
    kl4_local = kl_table_fft(4, ctx);
    kl4 = &kl4_local;
  }
  std::vector<cplx> eps = gauss_sums_all(ctx);
  std::vector<cplx> eps4(eps.size());
  for (std::size_t j = 0; j < eps.size(); ++j) {
    cplx e2 = eps[j] * eps[j];
    eps4[j] = e2 * e2;
  }
  // S(g^t) = sum_j eps_j^4 e(-jt/(q-1)) collapses all characters at once.
  std::vector<cplx> collapsed = fft::dft(eps4, -1);

  const double phi_scale = static_cast<double>(q - 1) / std::sqrt(static_cast<double>(q));
  const double qm2 = 1.0 / (static_cast<double>(q) * static_cast<double>(q));
  const cplx eps0_4 = eps4[0];

  double max_err = 0.0;
  std::uint64_t m = 1;
  for (std::uint64_t t = 0; t + 1 < q; ++t) {
    const cplx lhs = collapsed[t] - eps0_4;
    const cplx rhs = phi_scale * kl4->at(m) - cplx{qm2, 0.0};
    max_err = std::max(max_err, std::abs(lhs - rhs));
    m = ctx->mul(m, ctx->generator());
  }
  return max_err;
}

std::vector<cplx> correlation_row(const CtxPtr& ctx, std::uint64_t a, std::uint64_t l1,
                                  std::uint64_t l2, const TraceTable* kl4) {
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a) && ctx->is_unit(l1) && ctx->is_unit(l2), errc::invalid_argument,
          "correlation_row: a, l1, l2 must be units");
  TraceTable kl4_local;
  if (!kl4) {
    kl4_local = kl_table_fft(4, ctx);
    kl4 = &kl4_local;
  }
  const std::uint64_t al1 = ctx->mul(a % q, l1 % q);
  const std::uint64_t al2 = ctx->mul(a % q, l2 % q);
  TraceTable prod{ctx, std::vector<cplx>(q), "kl4-correlation"};
  for (std::uint64_t x = 0; x < q; ++x)
    prod.values[x] = kl4->at(ctx->mul(al1, x)) * std::conj(kl4->at(ctx->mul(al2, x)));
  return fourier_zq(prod).values;
}

cplx correlation_sum(const CtxPtr& ctx, std::uint64_t a, std::uint64_t mtilde,
                     std::uint64_t l1, std::uint64_t l2, const TraceTable* kl4) {
  return correlation_row(ctx, a, l1, l2, kl4)[mtilde % ctx->q()];
}

std::string trace_table_csv(const TraceTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "# q=" << table.q() << " label=" << table.label << "\n";
  os << "n,re,im\n";
  for (std::uint64_t n = 0; n < table.q(); ++n)
    os << n << ',' << table.values[n].real() << ',' << table.values[n].imag() << '\n';
  return os.str();
}

}  // namespace aplab
