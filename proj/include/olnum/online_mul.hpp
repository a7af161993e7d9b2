#pragma once

#include "online_common.hpp"
#include "params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace olnum {

enum class MulSelect { generic, table, golden, knuth, eisenstein };

struct MulOptions {
  MulSelect select = MulSelect::generic;
  std::optional<SelectTable> table;  // for MulSelect::table
  bool check = true;                 // exact invariant monitoring
  TraceSink trace;
};

struct MulState {
  int k = 0;
  ComplexQuad w;           // W_k
  ComplexQuad x, y;        // X_k, Y_k
  ComplexQuad p_partial;   // P_k
  size_t p_prev = 0;       // p_k (next step's p_{k−1})
  DigitString emitted;     // 0.p₁…p_k
};

// W_k = β(W_{k−1} − p_{k−1}) + (x_k·Y_{k−1} + y_k·X_k), p_k = Select_M(W_k).
class OnlineMultiplier {
 public:
  OnlineMultiplier(const NumerationSystem& sys, const OLCertificate& cert, const ParamSet& params,
                   MulOptions opt = {})
      : sys_(sys), cert_(with_budgets(cert, params)), params_(params), opt_(std::move(opt)) {
    if (params.mode != Mode::mult) throw DomainError("multiplier needs mult parameters");
    if (opt_.select == MulSelect::table && !opt_.table) throw DomainError("table selection needs a table");
    s_.p_prev = sys.zero_index();
    extended_ = extended_below(cert_);
    RealQuad rad = cert_.variant == CertVariant::mu_nu ? cert_.epsilon : cert_.epsilon / RealQuad(2);
    radius_ = rad;
    stats_.window_frac_digits = params.window_l;
    stats_.window_int_bound =
        opt_.select == MulSelect::table
            ? static_cast<size_t>(opt_.table->int_len)
            : detail::shift_bound(sys, cert_, sys.base_abs() * region_radius(cert_) + lit(rad));
  }

  // Consumes x_k, y_k (alphabet indices) and returns p_k.
  size_t step(size_t xk, size_t yk) {
    const ComplexQuad& beta = sys_.base();
    int k = s_.k + 1;
    ComplexQuad bk = sys_.power(-k);
    ComplexQuad x_new = s_.x + sys_.digit(xk) * bk;
    ComplexQuad y_new = s_.y + sys_.digit(yk) * bk;
    ComplexQuad w = beta * (s_.w - sys_.digit(s_.p_prev)) + (sys_.digit(xk) * s_.y + sys_.digit(yk) * x_new);
    ComplexQuad p_prev_partial = s_.p_partial;
    s_.k = k;
    s_.w = w;
    s_.x = x_new;
    s_.y = y_new;

    if (opt_.check) {
      if (w != sys_.power(k) * (x_new * y_new - p_prev_partial)) {
        throw InvariantViolation("step identity W_k = beta^k (X_k Y_k - P_{k-1}) failed at k=" +
                                 std::to_string(k));
      }
      check_containment(w, k);
    }

    Window win = detail::value_window(sys_, cert_, w, params_.window_l);
    stats_.max_window_int_digits = std::max(stats_.max_window_int_digits, win.digits.int_digits.size());
    if (win.digits.int_digits.size() > stats_.window_int_bound) {
      throw InvariantViolation("window integer part exceeds its bound at k=" + std::to_string(k));
    }
    size_t p = select(win);
    if (opt_.check) check_selection(w, p, k);

    s_.p_prev = p;
    s_.p_partial = p_prev_partial + sys_.digit(p) * bk;
    s_.emitted.frac_digits.push_back(p);
    ++stats_.steps;
    if (opt_.trace) opt_.trace({k, p, w, win.digits, std::nullopt});
    return p;
  }

  const MulState& state() const { return s_; }
  const RunStats& stats() const { return stats_; }
  const OLCertificate& certificate() const { return cert_; }

 private:
  bool below_extension(const ComplexQuad& v) const {
    return extended_ && v.is_real() &&
           v.re() < sys_.base().re() * cert_.lo() - cert_.epsilon / RealQuad(2);
  }

  size_t select(const Window& win) const {
    switch (opt_.select) {
      case MulSelect::table: return opt_.table->lookup(sys_, win);
      case MulSelect::golden: return golden_select_m(sys_, win);
      case MulSelect::knuth: return knuth_digit(sys_, window_value(sys_, win));
      case MulSelect::eisenstein: return eisenstein_digit(sys_, window_value(sys_, win));
      case MulSelect::generic: break;
    }
    return extended_ ? select_m_extended(cert_, sys_, win) : select_m(cert_, sys_, win);
  }

  void check_containment(const ComplexQuad& w, int k) const {
    if (below_extension(w) && w.re().sign() >= 0) return;
    if (!in_fattened_image(sys_, cert_, w, radius_)) {
      throw InvariantViolation("W_k left the fattened region at k=" + std::to_string(k));
    }
  }

  // The chosen digit equals Select_M on the certified window and W − p is
  // admissible.
  void check_selection(const ComplexQuad& w, size_t p, int k) {
    Window ref = detail::value_window(sys_, cert_, w, params_.window_l_bound);
    size_t q = extended_ ? select_m_extended(cert_, sys_, ref) : select_m(cert_, sys_, ref);
    ++stats_.selector_checks;
    if (q != p) {
      throw InvariantViolation("windowed Select differs from the certified Select at k=" +
                               std::to_string(k));
    }
    if (below_extension(window_value(sys_, ref)) && p == sys_.zero_index()) return;
    ComplexQuad z = w - sys_.digit(p);
    bool ok = cert_.variant == CertVariant::mu_nu ? detail::in_region_fattened(cert_, z, *cert_.mu)
                                                   : region_contains(cert_, z);
    if (!ok) throw InvariantViolation("W_k - p_k is not admissible at k=" + std::to_string(k));
  }

  const NumerationSystem& sys_;
  OLCertificate cert_;
  ParamSet params_;
  MulOptions opt_;
  MulState s_;
  RunStats stats_;
  bool extended_ = false;
  RealQuad radius_;
};

struct MulResult {
  DigitString product;  // 0.p₁…p_n
  int scale = 0;        // X·Y = β^scale · value(product)
  ComplexQuad w_last;   // W_n
  size_t p_last = 0;
  RunStats stats;
};

// Streams x, y are 0.x₁x₂… ; the δ leading zeros are supplied here.
inline MulResult mul_run_stream(const NumerationSystem& sys, const OLCertificate& cert,
                                const ParamSet& params, const DigitSource& xs,
                                const DigitSource& ys, int n, MulOptions opt = {}) {
  OnlineMultiplier m(sys, cert, params, std::move(opt));
  size_t z = sys.zero_index();
  for (int k = 1; k <= n; ++k) {
    int j = k - params.delta;
    size_t xk = j >= 1 ? xs(static_cast<size_t>(j)) : z;
    size_t yk = j >= 1 ? ys(static_cast<size_t>(j)) : z;
    m.step(xk, yk);
  }
  MulResult r;
  r.product = m.state().emitted;
  r.scale = 2 * params.delta;
  r.w_last = m.state().w;
  r.p_last = m.state().p_prev;
  r.stats = m.stats();
  return r;
}

// Operands with integer digits are shifted into fractions first.
inline MulResult mul_run(const NumerationSystem& sys, const OLCertificate& cert,
                         const ParamSet& params, const DigitString& x, const DigitString& y,
                         int n, MulOptions opt = {}) {
  Fraction fx = as_fraction(x), fy = as_fraction(y);
  MulResult r = mul_run_stream(sys, cert, params, finite_source(sys, fx.digits),
                               finite_source(sys, fy.digits), n, std::move(opt));
  r.scale += fx.shift + fy.shift;
  return r;
}

}  // namespace olnum
