#include "fplb/verify.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fplb {

namespace {

std::string at_t(std::uint64_t t) { return "t=" + std::to_string(t); }

std::uint64_t as_time(const Rational& value, const char* what) {
  if (value.get_den() != 1 || value < 0 || !mpz_fits_ulong_p(value.get_num_mpz_t())) {
    throw std::invalid_argument(std::string(what) + " is not a nonnegative integer: " + to_string(value));
  }
  return mpz_get_ui(value.get_num_mpz_t());
}

Rational from_u64(std::uint64_t v) { return Rational(mpz_class(std::to_string(v))); }

Rational from_double(double v) { return Rational(v); }

std::vector<Rational> block_maxima(const Vector& u) {
  std::vector<Rational> out;
  for (std::size_t b = 0; b + 3 <= u.size(); b += 3) out.push_back(u.slice(b, 3).max());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- RPS

VerificationReport verify_rps_periodicity(std::int64_t K, const Matrix& game) {
  if (K < 1) throw std::invalid_argument("verify_rps_periodicity: K must be >= 1");
  VerificationReport report("rps", "k=1.." + std::to_string(K));
  SymmetricRunner runner(game, Vector(game.rows()));

  // Constant-action runs between consecutive vertices: action 1, then 2, then 3.
  for (std::int64_t k = 1; k <= K; ++k) {
    const auto vertices = vertex_states(k);
    const std::uint64_t next_turn = static_cast<std::uint64_t>(9 * (k + 1) * (k + 1));
    const std::uint64_t ends[3] = {vertices[1].t, vertices[2].t, next_turn};

    while (runner.t() < vertices[0].t) runner.step();
    bool ok = report.expect_equal("k=" + std::to_string(k) + " x at " + at_t(vertices[0].t), vertices[0].x,
                                  runner.counts_vector());
    ok &= report.expect_equal("k=" + std::to_string(k) + " U at " + at_t(vertices[0].t), vertices[0].U,
                              runner.utility());
    for (std::size_t v = 0; v < 3 && ok; ++v) {
      while (runner.t() < ends[v]) {
        const std::size_t a = runner.step();
        if (a != v) {
          report.fail("k=" + std::to_string(k) + " action at " + at_t(runner.t()),
                      Rational(static_cast<long>(v + 1)), Rational(static_cast<long>(a + 1)));
          ok = false;
          break;
        }
      }
      if (ok && v < 2) {
        const VertexState& vs = vertices[v + 1];
        ok &= report.expect_equal("k=" + std::to_string(k) + " x at " + at_t(vs.t), vs.x, runner.counts_vector());
        ok &= report.expect_equal("k=" + std::to_string(k) + " U at " + at_t(vs.t), vs.U, runner.utility());
      }
    }
    if (!ok) break;
  }
  return report;
}

// ---------------------------------------------------------------- phases

VerificationReport verify_phase(std::int64_t k, const InstanceBundle& bundle) {
  if (k < 1) throw std::invalid_argument("verify_phase: k must be >= 1");
  VerificationReport report("phase", "k=" + std::to_string(k));
  const std::size_t active = active_block(k);
  const std::uint64_t len = as_time(bundle.q.total(k), "phase length");
  const std::uint64_t t0 = as_time(bundle.q0.total(k), "t0");
  const std::uint64_t t1 = as_time(bundle.q1.total(k), "t1");
  if (t1 != t0 + len) throw std::logic_error("verify_phase: inconsistent window bounds");
  const std::vector<std::uint32_t> rps = rps_actions(t1);

  report.witness("phase length T_{k+1}-T_k", from_u64(len), from_u64(len));
  report.witness("RPS window [t0, t1)", Vector{from_u64(t0), from_u64(t1)}, Vector{from_u64(t0), from_u64(t1)});

  SymmetricRunner runner(bundle.m, rotated_stack(bundle.vs, k));
  for (std::uint64_t tau = 0; tau < len; ++tau) {
    const std::vector<Rational> maxima = block_maxima(runner.utility());
    for (std::size_t b = 0; b < maxima.size(); ++b) {
      if (b != active && !(maxima[active] > maxima[b])) {
        report.fail("tau=" + std::to_string(tau) + " block " + std::to_string(active + 1) + " leads block " +
                        std::to_string(b + 1),
                    maxima[active], maxima[b]);
        return report;
      }
    }
    const std::size_t a = runner.step();
    if (a / 3 != active) {
      report.fail("tau=" + std::to_string(tau) + " action block", Rational(static_cast<long>(active + 1)),
                  Rational(static_cast<long>(a / 3 + 1)));
      return report;
    }
    const std::uint32_t expected = rps[t0 + tau];
    if (a % 3 != expected) {
      report.fail("tau=" + std::to_string(tau) + " in-block action vs RPS t=" + std::to_string(t0 + tau + 1),
                  Rational(static_cast<long>(expected + 1)), Rational(static_cast<long>(a % 3 + 1)));
      return report;
    }
  }
  report.expect_equal("U at T_{k+1}", rotated_stack(bundle.vs, k + 1), runner.utility());
  return report;
}

VerificationReport verify_phases(KRange range, const InstanceBundle& bundle, Execution exec) {
  if (range.first < 1 || range.last < range.first) throw std::invalid_argument("verify_phases: empty range");
  const std::size_t count = static_cast<std::size_t>(range.last - range.first + 1);
  std::vector<VerificationReport> parts(count, VerificationReport("phase", ""));
  for_each_index(count, exec, [&](std::size_t i) {
    parts[i] = verify_phase(range.first + static_cast<std::int64_t>(i), bundle);
  });
  VerificationReport report("phase", "k=" + std::to_string(range.first) + ".." + std::to_string(range.last));
  for (const auto& p : parts) {
    VerificationReport labelled("k=" + p.range().substr(2), p.range());
    labelled.absorb(p);
    report.absorb(labelled);
  }
  return report;
}

// ---------------------------------------------------------------- theorem

VerificationReport verify_theorem(std::int64_t K, const InstanceBundle& bundle) {
  if (K < 1) throw std::invalid_argument("verify_theorem: K must be >= 1");
  VerificationReport report("theorem", "j=1.." + std::to_string(3 * K + 1));
  const PhaseTimetable timetable_q = PhaseTimetable::from(bundle.q);
  const Vector lead_row = bundle.vs.v1.row(0);

  report.expect_equal("U0 = stack at T_1", rotated_stack(bundle.vs, 1), bundle.u0);
  SymmetricRunner runner(bundle.m, bundle.u0);
  for (std::int64_t j = 1; j <= 3 * K + 1; ++j) {
    const std::uint64_t tj = as_time(timetable_q.at(j), "T_j");
    while (runner.t() < tj) runner.step();
    const Vector u = runner.utility();
    if (!report.expect_equal("U at T_" + std::to_string(j) + " (" + at_t(tj) + ")", rotated_stack(bundle.vs, j), u)) {
      break;
    }
    if (j > 1 && (j - 1) % 3 == 0) {
      const std::int64_t k = (j - 1) / 3;
      const Rational max_u = u.max();
      report.expect_equal("max U at T_" + std::to_string(j), dot(lead_row, bvec(j)), max_u);
      const Rational floor_bound = make_rational(18 * k * k);
      if (max_u >= floor_bound) {
        report.witness("max U at T_" + std::to_string(j) + " >= 18k^2", floor_bound, max_u);
      } else {
        report.fail("max U at T_" + std::to_string(j) + " >= 18k^2", floor_bound, max_u);
      }
      const Rational t_rat = from_u64(tj);
      const Rational gap = 2 * max_u / t_rat;
      const Rational certificate = make_rational(36 * k * k) / t_rat;
      if (gap >= certificate) {
        report.witness("gap at T_" + std::to_string(j) + " >= 36k^2/T", certificate, gap);
      } else {
        report.fail("gap at T_" + std::to_string(j) + " >= 36k^2/T", certificate, gap);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------- augmentation

VerificationReport verify_aug_offset(std::uint64_t T, const InstanceBundle& bundle) {
  if (T < 2) throw std::invalid_argument("verify_aug_offset: T must be >= 2");
  VerificationReport report("aug-offset", "t=1.." + std::to_string(T));
  SymmetricRunner aug(bundle.m_aug, Vector(bundle.m_aug.rows()));
  SymmetricRunner base(bundle.m, bundle.u0);

  const std::size_t first = aug.step();
  report.expect_equal("first action is the dummy", Rational(1), Rational(static_cast<long>(first + 1)));

  std::uint64_t ties = 0;
  Rational min_gap = aug.top_gap();
  std::uint64_t min_at = 1;
  bool ok = true;
  for (std::uint64_t t = 1; t <= T && ok; ++t) {
    // aug.t() == t here: Û_t is current.
    const Rational dummy = aug.utility_at(0);
    const Rational top = aug.max_utility();
    if (!(dummy < top)) {
      report.fail("dummy below max at " + at_t(t), top, dummy);
      ok = false;
      break;
    }
    const Rational gap = aug.top_gap();
    if (t >= 2) {
      if (gap == 0) ++ties;
      if (gap < min_gap || min_at == 1) {
        min_gap = gap;
        min_at = t;
      }
    }
    const std::size_t i = base.step();
    const std::size_t i_hat = aug.step();
    if (i_hat != i + 1) {
      report.fail("i_hat(" + std::to_string(t + 1) + ") = i(" + std::to_string(t) + ") + 1",
                  Rational(static_cast<long>(i + 2)), Rational(static_cast<long>(i_hat + 1)));
      ok = false;
    }
  }
  report.expect_equal("dummy play count", Rational(1), from_u64(aug.counts()[0]));
  report.witness("min top gap of U_hat over t=2..T", min_gap, min_gap);
  report.note("ties after the first step: " + std::to_string(ties) + "; min top gap " + to_string(min_gap) +
              " at " + at_t(min_at));
  return report;
}

NoTieResult no_tie_scan(const Matrix& game, std::uint64_t T) {
  if (T < 2) throw std::invalid_argument("no_tie_scan: T must be >= 2");
  SymmetricRunner runner(game, Vector(game.rows()));
  runner.step();
  NoTieResult result;
  for (std::uint64_t t = 2; t <= T; ++t) {
    runner.step();
    Rational gap = runner.top_gap();
    if (gap == 0) ++result.ties;
    if (t == 2 || gap < result.min_top_gap) {
      result.min_top_gap = std::move(gap);
      result.at_t = t;
    }
  }
  return result;
}

VerificationReport verify_no_tie(std::uint64_t T, const InstanceBundle& bundle) {
  VerificationReport report("no-tie", "t=2.." + std::to_string(T));
  const NoTieResult scan = no_tie_scan(bundle.m_aug, T);
  if (scan.min_top_gap > 0) {
    report.witness("min top gap at " + at_t(scan.at_t), Rational(0), scan.min_top_gap);
  } else {
    report.fail("min top gap at " + at_t(scan.at_t) + " must be > 0", Rational(0), scan.min_top_gap);
  }
  report.note("minimum top gap " + to_string(scan.min_top_gap) + " at " + at_t(scan.at_t) + "; tied steps " +
              std::to_string(scan.ties));
  return report;
}

// ---------------------------------------------------------------- rate

std::vector<GapPoint> gap_curve(const Matrix& game, const Vector& u_init, std::uint64_t T, SampleStride stride) {
  std::vector<GapPoint> out;
  if (T == 0) return out;
  const auto times = stride.times(1, T);
  SymmetricRunner runner(game, u_init);
  for (const std::uint64_t t : times) {
    while (runner.t() < t) runner.step();
    out.push_back({t, 2 * runner.max_utility() / from_u64(t)});
  }
  return out;
}

RateFit fit_rate(std::span<const std::pair<std::uint64_t, double>> curve, std::uint64_t t_min,
                 std::uint64_t t_max) {
  if (static_cast<double>(t_max) < 100.0 * static_cast<double>(t_min)) {
    throw std::invalid_argument("fit_rate: window must span at least two decades");
  }
  std::vector<double> xs, ys;
  std::uint64_t lo = 0, hi = 0;
  for (const auto& [t, gap] : curve) {
    if (t < t_min || t > t_max || !(gap > 0)) continue;
    if (xs.empty()) lo = t;
    hi = t;
    xs.push_back(std::log(static_cast<double>(t)));
    ys.push_back(std::log(gap));
  }
  if (xs.size() < 10) throw std::invalid_argument("fit_rate: need at least 10 samples in the window");
  if (static_cast<double>(hi) < 10.0 * static_cast<double>(lo)) {
    throw std::invalid_argument("fit_rate: samples must cover at least one decade of the window");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  RateFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.coefficient = std::exp(intercept);
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.t_min = lo;
  fit.t_max = hi;
  fit.samples = xs.size();
  return fit;
}

RateFit fit_rate(const std::vector<GapPoint>& curve, std::uint64_t t_min, std::uint64_t t_max) {
  std::vector<std::pair<std::uint64_t, double>> points;
  points.reserve(curve.size());
  for (const auto& p : curve) points.emplace_back(p.t, p.gap.get_d());
  return fit_rate(points, t_min, t_max);
}

RateResult verify_rate(std::uint64_t t_max_run, std::uint64_t fit_min, std::uint64_t fit_max,
                       const InstanceBundle& bundle, RateTolerance tol) {
  RateResult result{VerificationReport("rate", "fit t=" + std::to_string(fit_min) + ".." + std::to_string(fit_max)),
                    {},
                    gap_curve(bundle.m_aug, Vector(bundle.m_aug.rows()), t_max_run)};
  result.fit = fit_rate(result.curve, fit_min, fit_max);
  const double de = std::abs(result.fit.exponent - tol.exponent);
  const double dc = std::abs(result.fit.coefficient - tol.coefficient);
  if (de <= tol.exponent_tol) {
    result.report.witness("exponent", from_double(tol.exponent), from_double(result.fit.exponent));
  } else {
    result.report.fail("exponent within " + std::to_string(tol.exponent_tol), from_double(tol.exponent),
                       from_double(result.fit.exponent));
  }
  if (dc <= tol.coefficient_tol) {
    result.report.witness("coefficient", from_double(tol.coefficient), from_double(result.fit.coefficient));
  } else {
    result.report.fail("coefficient within " + std::to_string(tol.coefficient_tol), from_double(tol.coefficient),
                       from_double(result.fit.coefficient));
  }
  result.report.note("exponent " + std::to_string(result.fit.exponent) + ", coefficient " +
                     std::to_string(result.fit.coefficient) + ", rms residual " +
                     std::to_string(result.fit.residual) + ", " + std::to_string(result.fit.samples) + " samples");
  return result;
}

// ---------------------------------------------------------------- properties

VerificationReport verify_monotone(const Matrix& game, const Vector& u_init, std::uint64_t T) {
  VerificationReport report("monotone", "t=1.." + std::to_string(T));
  SymmetricRunner runner(game, u_init);
  Rational prev_max = runner.max_utility();
  bool pending_increase = false;  // max{U_t} > max{U_{t-1}} at the last step
  std::size_t last_action = 0;
  std::uint64_t increases = 0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const std::size_t a = runner.step();
    if (pending_increase && a == last_action) {
      report.fail("strict increase at " + at_t(t - 1) + " but i_t repeats", Rational(0), Rational(1));
      return report;
    }
    Rational cur_max = runner.max_utility();
    if (cur_max < prev_max) {
      report.fail("max U nondecreasing at " + at_t(t), prev_max, cur_max);
      return report;
    }
    pending_increase = cur_max > prev_max;
    if (pending_increase) ++increases;
    last_action = a;
    prev_max = std::move(cur_max);
  }
  report.witness("strict increases", from_u64(increases), from_u64(increases));
  return report;
}

VerificationReport verify_float_agreement(const Matrix& game, std::uint64_t T) {
  VerificationReport report("float-agreement", "t=1.." + std::to_string(T));
  const std::size_t n = game.rows();
  std::vector<double> cols(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) cols[c * n + r] = game(r, c).get_d();
  }
  std::vector<double> u(n, 0.0);
  SymmetricRunner exact(game, Vector(n));
  for (std::uint64_t t = 1; t <= T; ++t) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
      if (u[r] > u[best]) best = r;
    }
    for (std::size_t r = 0; r < n; ++r) u[r] += cols[best * n + r];
    const std::size_t a = exact.step();
    if (a != best) {
      report.fail("action at " + at_t(t), Rational(static_cast<long>(a + 1)), Rational(static_cast<long>(best + 1)));
      return report;
    }
  }
  report.witness("actions compared", from_u64(T), from_u64(T));
  return report;
}

VerificationReport verify_skew(const InstanceBundle& bundle) {
  VerificationReport report("skew-symmetry", "M, M_aug");
  for (const auto* m : {&bundle.m, &bundle.m_aug}) {
    const Matrix sum = *m + m->transpose();
    const std::string name = m == &bundle.m ? "M" : "M_aug";
    for (std::size_t r = 0; r < sum.rows(); ++r) {
      if (sum.row(r) != Vector(sum.cols())) {
        report.fail(name + " + transpose row " + std::to_string(r + 1), Vector(sum.cols()), sum.row(r));
        break;
      }
    }
    if (report.passed()) report.witness(name + " skew-symmetric", Rational(1), Rational(1));
  }
  return report;
}

}  // namespace fplb
