#include "momentlab/scenario_pipeline.hpp"

#include <cmath>
#include <functional>
#include <optional>

#include "momentlab/concentration.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/trace.hpp"

namespace momentlab {

namespace {

constexpr double kRepresentationTol = 1e-12;

Json error_json(const std::exception& e) {
  Json out = {{"error", e.what()}};
  if (const auto* me = dynamic_cast<const Error*>(&e)) out["kind"] = std::string(to_string(me->kind()));
  return out;
}

std::string coords_label(const SubalgebraIndex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace

const StageResult& ScenarioReport::stage(const std::string& name) const {
  for (const auto& s : stages)
    if (s.name == name) return s;
  raise(ErrorKind::InvalidArgument, "no stage named " + name);
}

Json to_json(const ScenarioReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back({{"name", s.name}, {"status", s.status}, {"data", s.data}});
  return {{"stages", stages}, {"passed", r.passed}};
}

ScenarioReport verify_main_theorem_scenario(const MainTheoremInput& in) {
  require(in.measure.dim() == in.q.dim(), ErrorKind::DimensionMismatch, "measure and q differ in dimension");
  require(in.degree >= 1, ErrorKind::InvalidArgument, "degree must be at least 1");
  for (double e : in.eps_grid) require(e > 0.0 && e < 1.0, ErrorKind::InvalidArgument, "eps must lie in (0, 1)");

  ScenarioReport report;
  const int n = static_cast<int>(in.measure.dim());

  // Runs `body` unless a prerequisite is missing; exceptions fail the stage.
  auto run = [&](const std::string& name, bool ready, const std::function<bool(Json&)>& body) {
    StageResult st{name, "skipped", Json::object()};
    if (!ready) {
      st.data["reason"] = "an earlier stage did not produce its output";
    } else {
      try {
        st.status = body(st.data) ? "pass" : "fail";
      } catch (const std::exception& e) {
        st.status = "fail";
        st.data.update(error_json(e));
      }
    }
    report.stages.push_back(std::move(st));
  };

  std::optional<MomentFunctional> l;
  run("moment_functional", true, [&](Json& d) {
    l.emplace(MomentFunctional::from_measure(in.measure, 2 * in.degree));
    const auto cert = psd_certificate(moment_matrix(*l, in.degree));
    d["max_degree"] = l->max_degree();
    d["moments"] = l->moments().size();
    d["mass"] = l->moment(MultiIndex(static_cast<std::size_t>(n), 0));
    d["moment_matrix_min_eigenvalue"] = cert.min_eigenvalue;
    d["moment_matrix_psd"] = cert.psd;
    return cert.psd;
  });

  std::optional<GramForm> s_l;
  run("s_L_gram", l.has_value(), [&](Json& d) {
    const Matrix g = s_L_gram(*l);
    const auto cert = psd_certificate(g);
    d["gram"] = to_json(g);
    d["min_eigenvalue"] = cert.min_eigenvalue;
    d["psd"] = cert.psd;
    s_l.emplace(g);
    return cert.psd;
  });

  bool trace_finite = false;
  run("trace", s_l.has_value(), [&](Json& d) {
    const auto tr = trace(*s_l, in.q);
    d["trace"] = to_json(tr);
    trace_finite = tr.value.is_finite();
    return trace_finite;
  });

  std::optional<MeasureFamily> fam;
  run("marginals", true, [&](Json& d) {
    const auto sets = coordinate_lattice(n);
    fam.emplace(marginal_family(in.measure, sets));
    Json labels = Json::array();
    for (const auto& s : sets) labels.push_back(coords_label(s));
    d["count"] = sets.size();
    d["sets"] = labels;
    return true;
  });

  run("consistency", fam.has_value(), [&](Json& d) {
    const auto c = consistency_check(*fam, 2 * in.degree);
    d = to_json(c);
    return c.consistent;
  });

  std::vector<double> certified_eps;
  run("concentration", fam && s_l, [&](Json& d) {
    bool ok = true;
    Json runs = Json::array();
    for (double eps : in.eps_grid) {
      const auto c = concentration_check(*fam, *s_l, eps, std::sqrt(eps), in.probe_budget, in.seed);
      runs.push_back(to_json(c));
      if (c.certified) certified_eps.push_back(eps);
      ok = ok && c.certified;
    }
    d["runs"] = runs;
    return ok;
  });

  run("prokhorov", fam && s_l && trace_finite && !certified_eps.empty(), [&](Json& d) {
    bool ok = true;
    Json runs = Json::array();
    for (double eps : certified_eps) {
      const auto p = prokhorov_mass_check(*fam, *s_l, in.q, eps, std::sqrt(eps));
      runs.push_back(to_json(p));
      ok = ok && p.passed;
    }
    d["runs"] = runs;
    return ok;
  });

  run("support", true, [&](Json& d) {
    bool continuous = true, in_module = true;
    Json atoms = Json::array();
    for (std::size_t j : in.measure.support()) {
      const Vector& c = in.measure.atom(j);
      const auto dual = dual_norm(in.q, c);
      const auto violations = in.module.violations(c);
      continuous = continuous && dual.is_finite();
      in_module = in_module && violations.empty();
      atoms.push_back({{"atom", to_json(c)},
                       {"dual_norm", to_json(dual)},
                       {"in_K_Q", violations.empty()},
                       {"violated_generators", violations}});
    }
    d["atoms"] = atoms;
    d["q_continuous"] = continuous;
    d["K_Q_violation"] = !in_module;
    return continuous && in_module;
  });

  run("representation", l.has_value(), [&](Json& d) {
    double worst = 0.0;
    int checked = 0;
    bool ok = true;
    for (const auto& alpha : monomials_up_to(n, l->max_degree())) {
      const AlgebraElement mono = AlgebraElement::monomial(n, l->max_degree(), alpha);
      double integral = 0.0;
      for (std::size_t j = 0; j < in.measure.size(); ++j)
        integral += in.measure.weight(j) * mono.evaluate(in.measure.atom(j));
      const double target = l->moment(alpha);
      const double diff = std::abs(integral - target);
      worst = std::max(worst, diff);
      ok = ok && diff <= kRepresentationTol * std::max(1.0, std::abs(target));
      ++checked;
    }
    d["monomials_checked"] = checked;
    d["max_mismatch"] = worst;
    return ok;
  });

  report.passed = true;
  for (const auto& s : report.stages) report.passed = report.passed && s.status == "pass";
  return report;
}

}  // namespace momentlab
