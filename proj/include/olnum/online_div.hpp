#pragma once

#include "online_common.hpp"
#include "params.hpp"
#include "preprocess.hpp"

#include <optional>
#include <string>
#include <vector>

namespace olnum {

enum class DivSelect { generic, golden, knuth, eisenstein };

struct DivOptions {
  DivSelect select = DivSelect::generic;
  bool check = true;
  TraceSink trace;
};

struct DivState {
  int k = 0;
  ComplexQuad w;          // W_k
  ComplexQuad n_partial;  // N_{k+δ}
  ComplexQuad d_partial;  // D_{k+δ}
  ComplexQuad q_partial;  // Q_k
  size_t q_prev = 0;
  std::vector<size_t> d_digits;  // d₁…d_{k+δ}
  DigitString emitted;
};

// W_k = β(W_{k−1} − q_{k−1}D_{k−1+δ}) + (n_{k+δ} − Q_{k−1}d_{k+δ})β^−δ,
// q_k = Select_D(W_k, D_{k+δ}). The numerator stream is the plain 0.n'₁n'₂…;
// its δ leading zeros are implied (n_{k+δ} = n'_k).
class OnlineDivider {
 public:
  OnlineDivider(const NumerationSystem& sys, const OLCertificate& cert, const ParamSet& params,
                DivOptions opt = {})
      : sys_(sys), cert_(with_budgets(cert, params)), params_(params), opt_(std::move(opt)) {
    if (params.mode != Mode::div) throw DomainError("divider needs div parameters");
    if (params.d_min.lo <= 0) throw DomainError("divider needs a positive D_min");
    if (!params.alpha) throw DomainError("divider needs alpha");
    s_.q_prev = sys.zero_index();
    extended_ = extended_below(cert_);
    mu_nu_ = cert_.variant == CertVariant::mu_nu;
    radius_ = mu_nu_ ? cert_.epsilon : cert_.epsilon / RealQuad(2);
    dmin2_ = RealQuad(params.d_min.lo * params.d_min.lo);
    stats_.window_frac_digits = params.window_l;
    Expr sup_q = sys.base_abs() * region_radius(cert_) + lit(radius_);
    stats_.window_int_bound = detail::shift_bound(sys, cert_, sys.d_max() * sup_q);
  }

  // The first δ divisor digits, consumed before step 1.
  void prime(const std::vector<size_t>& d_head) {
    if (static_cast<int>(d_head.size()) != params_.delta) throw DomainError("prime needs delta digits");
    for (size_t d : d_head) push_divisor(d);
  }

  size_t step(size_t n_next, size_t d_next) {
    const ComplexQuad& beta = sys_.base();
    int k = s_.k + 1;
    int delta = params_.delta;
    ComplexQuad bd = sys_.power(-delta);
    ComplexQuad d_prev = s_.d_partial;
    ComplexQuad w = beta * (s_.w - sys_.digit(s_.q_prev) * d_prev) +
                    (sys_.digit(n_next) - s_.q_partial * sys_.digit(d_next)) * bd;
    s_.n_partial += sys_.digit(n_next) * sys_.power(-(k + delta));
    push_divisor(d_next);
    s_.k = k;
    s_.w = w;
    const ComplexQuad& D = s_.d_partial;

    if (opt_.check) {
      if (w != sys_.power(k) * (s_.n_partial - s_.q_partial * D)) {
        throw InvariantViolation("step identity W_k = beta^k (N_{k+d} - Q_{k-1} D_{k+d}) failed at k=" +
                                 std::to_string(k));
      }
      check_containment(w / D, k);
    }

    Window vw = detail::value_window(sys_, cert_, w, params_.window_l);
    Window dw = divisor_window(params_.window_l);
    stats_.max_window_int_digits = std::max(stats_.max_window_int_digits, vw.digits.int_digits.size());
    if (vw.digits.int_digits.size() > stats_.window_int_bound) {
      throw InvariantViolation("window integer part exceeds its bound at k=" + std::to_string(k));
    }
    size_t q = select(vw, dw);
    if (opt_.check) check_selection(w, D, vw, dw, q, k);

    s_.q_prev = q;
    s_.q_partial += sys_.digit(q) * sys_.power(-k);
    s_.emitted.frac_digits.push_back(q);
    ++stats_.steps;
    if (opt_.trace) opt_.trace({k, q, w, vw.digits, dw.digits});
    return q;
  }

  const DivState& state() const { return s_; }
  const RunStats& stats() const { return stats_; }
  const OLCertificate& certificate() const { return cert_; }

 private:
  void push_divisor(size_t d) {
    s_.d_digits.push_back(d);
    int j = static_cast<int>(s_.d_digits.size());
    s_.d_partial += sys_.digit(d) * sys_.power(-j);
    if (s_.d_partial.norm_sq() < dmin2_) {
      throw DomainError("divisor prefix D_" + std::to_string(j) + " is below D_min");
    }
  }

  Window divisor_window(int L) const {
    Window w = truncate(sys_, DigitString{{}, s_.d_digits}, L);
    if (!w.exact && mu_nu_) w.tail_bound = (sys_.d_max() / pow(sys_.base_abs(), L))(128);
    return w;
  }

  bool below_extension(const ComplexQuad& v) const {
    return extended_ && v.is_real() &&
           v.re() < sys_.base().re() * cert_.lo() - cert_.epsilon / RealQuad(2);
  }

  size_t generic(const Window& vw, const Window& dw) const {
    if (extended_) {
      ComplexQuad V = window_value(sys_, vw), Dl = window_value(sys_, dw);
      if (!Dl.is_zero() && below_extension(V / Dl)) return sys_.zero_index();
    }
    return select_d(cert_, sys_, vw, dw, *params_.alpha, params_.d_min);
  }

  size_t select(const Window& vw, const Window& dw) const {
    switch (opt_.select) {
      case DivSelect::golden: return golden_select_d(sys_, vw, dw);
      case DivSelect::knuth:
        return knuth_digit(sys_, window_value(sys_, vw) / window_value(sys_, dw));
      case DivSelect::eisenstein:
        return eisenstein_digit(sys_, window_value(sys_, vw) / window_value(sys_, dw));
      case DivSelect::generic: break;
    }
    return generic(vw, dw);
  }

  void check_containment(const ComplexQuad& u, int k) const {
    if (below_extension(u) && u.re().sign() >= 0) return;
    if (!in_fattened_image(sys_, cert_, u, radius_)) {
      throw InvariantViolation("W_k left D_{k+d}(beta I)^r at k=" + std::to_string(k));
    }
  }

  void check_selection(const ComplexQuad& w, const ComplexQuad& D, const Window& vw,
                       const Window& dw, size_t q, int k) {
    size_t ref = generic(vw, dw);
    ++stats_.selector_checks;
    if (ref != q) {
      throw InvariantViolation("windowed Select_D differs from the certified Select_D at k=" +
                               std::to_string(k));
    }
    ComplexQuad V = window_value(sys_, vw), Dl = window_value(sys_, dw);
    if (Dl.norm_sq() < dmin2_) throw InvariantViolation("divisor window below D_min at k=" + std::to_string(k));
    ComplexQuad u = w / D;
    // the windows see W/D to within ε/2 (μ/2)
    RealQuad half = mu_nu_ ? *cert_.mu / RealQuad(2) : cert_.epsilon / RealQuad(2);
    RealQuad gap = (u - V / Dl).norm_sq();
    if (mu_nu_ ? gap > half * half : gap >= half * half) {
      throw InvariantViolation("window quotient V/Delta too far from W/D at k=" + std::to_string(k));
    }
    if (below_extension(V / Dl) && q == sys_.zero_index()) return;
    ComplexQuad z = u - sys_.digit(q);
    bool ok = mu_nu_ ? detail::in_region_fattened(cert_, z, *cert_.mu) : region_contains(cert_, z);
    if (!ok) throw InvariantViolation("W_k/D - q_k is not admissible at k=" + std::to_string(k));
  }

  const NumerationSystem& sys_;
  OLCertificate cert_;
  ParamSet params_;
  DivOptions opt_;
  DivState s_;
  RunStats stats_;
  bool extended_ = false, mu_nu_ = false;
  RealQuad radius_, dmin2_;
};

struct DivResult {
  DigitString quotient;  // 0.q₁…q_n
  int scale = 0;         // N/D = β^scale · value(quotient)
  int divisor_shift = 0; // from preprocessing
  ComplexQuad w_last;
  ComplexQuad d_used;    // D_{n+δ}
  size_t q_last = 0;
  RunStats stats;
};

// Streams are fractions 0.n₁… and a preprocessed 0.d₁… (d₁ ≠ 0).
inline DivResult div_run_stream(const NumerationSystem& sys, const OLCertificate& cert,
                                const ParamSet& params, const DigitSource& ns,
                                const DigitSource& ds, int n, DivOptions opt = {}) {
  OnlineDivider dv(sys, cert, params, std::move(opt));
  std::vector<size_t> head;
  for (int j = 1; j <= params.delta; ++j) head.push_back(ds(static_cast<size_t>(j)));
  dv.prime(head);
  for (int k = 1; k <= n; ++k) {
    dv.step(ns(static_cast<size_t>(k)), ds(static_cast<size_t>(k + params.delta)));
  }
  DivResult r;
  r.quotient = dv.state().emitted;
  r.scale = params.delta;
  r.w_last = dv.state().w;
  r.d_used = dv.state().d_partial;
  r.q_last = dv.state().q_prev;
  r.stats = dv.stats();
  return r;
}

// N and D in any point position; D is preprocessed with spec (rules may be
// empty, leaving only the point shift).
inline DivResult div_run(const NumerationSystem& sys, const OLCertificate& cert,
                         const ParamSet& params, const PreprocessSpec& spec, const DigitString& num,
                         const DigitString& den, int n, DivOptions opt = {}) {
  Preprocessed pd = preprocess_divisor(sys, spec, den);
  Fraction fn = as_fraction(num);
  DivResult r = div_run_stream(sys, cert, params, finite_source(sys, fn.digits),
                               finite_source(sys, pd.digits.frac_digits), n, std::move(opt));
  r.divisor_shift = pd.shift;
  r.scale += fn.shift + pd.shift;
  return r;
}

}  // namespace olnum
