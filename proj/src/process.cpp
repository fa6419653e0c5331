#include "dimlab/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dimlab/rng.hpp"

namespace dimlab {

namespace {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double ContinuousSpec::pdf(double x) const {
  if (x <= support_low || x >= support_high) return 0.0;
  switch (family) {
    case ContinuousFamily::uniform:
      return 1.0 / (support_high - support_low);
    case ContinuousFamily::truncated_gaussian: {
      const double zl = (support_low - mean) / stddev;
      const double zu = (support_high - mean) / stddev;
      const double norm = std_normal_cdf(zu) - std_normal_cdf(zl);
      const double z = (x - mean) / stddev;
      return std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * M_PI) * norm);
    }
  }
  return 0.0;
}

double ContinuousSpec::mass(double a, double b) const {
  a = std::max(a, support_low);
  b = std::min(b, support_high);
  if (b <= a) return 0.0;
  switch (family) {
    case ContinuousFamily::uniform:
      return (b - a) / (support_high - support_low);
    case ContinuousFamily::truncated_gaussian: {
      const double zl = (support_low - mean) / stddev;
      const double zu = (support_high - mean) / stddev;
      const double norm = std_normal_cdf(zu) - std_normal_cdf(zl);
      return (std_normal_cdf((b - mean) / stddev) - std_normal_cdf((a - mean) / stddev)) / norm;
    }
  }
  return 0.0;
}

namespace {

// Composite Simpson over the support; the pdf must integrate to 1 within 1e-9.
double integrate_pdf(const ContinuousSpec& c) {
  const int n = 4096;  // even
  const double h = (c.support_high - c.support_low) / n;
  double acc = 0.0;
  for (int i = 1; i < n; ++i) {
    const double x = c.support_low + i * h;
    acc += (i % 2 == 1 ? 4.0 : 2.0) * c.pdf(x);
  }
  // endpoints are zero by convention (open support)
  return acc * h / 3.0;
}

void check_continuous(const ContinuousSpec& c, ValidationReport& rep) {
  if (!(std::isfinite(c.support_low) && std::isfinite(c.support_high))) {
    rep.violations.push_back("continuous: support bounds must be finite");
    return;
  }
  if (!(c.support_low < c.support_high)) {
    rep.violations.push_back("continuous: support_low must be < support_high");
    return;
  }
  if (c.family == ContinuousFamily::truncated_gaussian && !(c.stddev > 0.0)) {
    rep.violations.push_back("continuous: stddev must be positive");
    return;
  }
  const double total = integrate_pdf(c);
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream ss;
    ss << "continuous: density integrates to " << total << ", not 1";
    rep.violations.push_back(ss.str());
  }
}

}  // namespace

ValidationReport validate_spec(const ProcessSpec& spec) {
  ValidationReport rep;
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    std::ostringstream ss;
    ss << "p out of [0,1]: " << spec.p;
    rep.violations.push_back(ss.str());
  }
  const bool needs_continuous = spec.kind != ProcessKind::iid_discrete;
  if (needs_continuous) {
    if (!spec.continuous) {
      rep.violations.push_back("continuous component required for this kind");
    } else {
      check_continuous(*spec.continuous, rep);
    }
  }
  if (spec.kind == ProcessKind::iid_discrete) {
    if (spec.discrete_pmf.empty()) {
      rep.violations.push_back("discrete_pmf must be nonempty");
    } else {
      double sum = 0.0;
      std::set<double> values;
      for (const auto& a : spec.discrete_pmf) {
        sum += a.prob;
        if (a.prob < 0.0) rep.violations.push_back("discrete_pmf: negative probability");
        if (!values.insert(a.value).second)
          rep.violations.push_back("discrete_pmf: atom values must be distinct");
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream ss;
        ss << "discrete_pmf sums to " << sum;
        rep.violations.push_back(ss.str());
      }
    }
  }
  if (spec.kind == ProcessKind::iid_mixture && spec.continuous) {
    if (spec.atom > spec.continuous->support_low && spec.atom < spec.continuous->support_high) {
      // allowed, but the atom must not sit inside the continuous support in a
      // way that makes "value == atom" ambiguous; density gives it measure 0,
      // so sampling stays well defined. Nothing to flag.
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

void require_valid(const ProcessSpec& spec) {
  const ValidationReport rep = validate_spec(spec);
  if (!rep.ok) {
    std::string msg = "invalid ProcessSpec:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    throw SpecError(msg);
  }
}

namespace {

double draw_continuous(const ContinuousSpec& c, Rng& rng) {
  switch (c.family) {
    case ContinuousFamily::uniform:
      return rng.next_uniform(c.support_low, c.support_high);
    case ContinuousFamily::truncated_gaussian: {
      // rejection against the untruncated Gaussian; exact for bounded windows
      for (;;) {
        const double x = c.mean + c.stddev * rng.next_gaussian();
        if (x > c.support_low && x < c.support_high) return x;
      }
    }
  }
  return 0.0;
}

}  // namespace

SamplePath sample_path(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
  require_valid(spec);
  if (n < 1) throw SpecError("sample_path: n must be >= 1");
  SamplePath path;
  path.spec = spec;
  path.seed = seed;
  path.values.resize(n);
  Rng rng(seed);

  switch (spec.kind) {
    case ProcessKind::iid_continuous:
      for (std::size_t i = 0; i < n; ++i) path.values[i] = draw_continuous(*spec.continuous, rng);
      break;
    case ProcessKind::iid_mixture:
      path.jump_indicators.assign(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.next_bernoulli(spec.p)) {
          path.values[i] = draw_continuous(*spec.continuous, rng);
          path.jump_indicators[i] = 1;
        } else {
          path.values[i] = spec.atom;
        }
      }
      break;
    case ProcessKind::iid_discrete: {
      // inverse CDF over the atom list
      std::vector<double> cum;
      cum.reserve(spec.discrete_pmf.size());
      double acc = 0.0;
      for (const auto& a : spec.discrete_pmf) {
        acc += a.prob;
        cum.push_back(acc);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.next_u01() * acc;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const std::size_t idx = std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
        path.values[i] = spec.discrete_pmf[idx].value;
      }
      break;
    }
    case ProcessKind::piecewise_constant_markov: {
      path.jump_indicators.assign(n, 0);
      // stationary start: the marginal of the chain is f_c itself
      path.values[0] = draw_continuous(*spec.continuous, rng);
      for (std::size_t i = 1; i < n; ++i) {
        if (rng.next_bernoulli(spec.p)) {
          path.values[i] = draw_continuous(*spec.continuous, rng);
          path.jump_indicators[i] = 1;
        } else {
          path.values[i] = path.values[i - 1];
        }
      }
      break;
    }
  }
  return path;
}

JumpStats jump_statistics(const SamplePath& path) {
  JumpStats st;
  const std::size_t n = path.values.size();
  if (n == 0) return st;
  switch (path.spec.kind) {
    case ProcessKind::piecewise_constant_markov: {
      if (path.jump_indicators.size() != n)
        throw SpecError("jump_statistics: missing jump indicators for Markov path");
      for (std::size_t i = 1; i < n; ++i) st.count += path.jump_indicators[i] ? 1 : 0;
      st.fraction = n > 1 ? static_cast<double>(st.count) / static_cast<double>(n - 1) : 0.0;
      break;
    }
    case ProcessKind::iid_mixture: {
      for (double v : path.values) st.count += (v != path.spec.atom) ? 1 : 0;
      st.fraction = static_cast<double>(st.count) / static_cast<double>(n);
      break;
    }
    default:
      throw SpecError("jump_statistics: path must come from a Markov or mixture spec");
  }
  return st;
}

void write_csv(const SamplePath& path, std::ostream& os) {
  const bool with_jump = !path.jump_indicators.empty();
  os << (with_jump ? "index,value,jump\n" : "index,value\n");
  os.precision(17);
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    os << i << ',' << path.values[i];
    if (with_jump) os << ',' << static_cast<int>(path.jump_indicators[i]);
    os << '\n';
  }
}

const char* to_string(ProcessKind k) {
  switch (k) {
    case ProcessKind::iid_mixture: return "iid_mixture";
    case ProcessKind::iid_continuous: return "iid_continuous";
    case ProcessKind::iid_discrete: return "iid_discrete";
    case ProcessKind::piecewise_constant_markov: return "piecewise_constant_markov";
  }
  return "?";
}

const char* to_string(ContinuousFamily f) {
  switch (f) {
    case ContinuousFamily::uniform: return "uniform";
    case ContinuousFamily::truncated_gaussian: return "truncated_gaussian";
  }
  return "?";
}

namespace {

ProcessKind kind_from_string(const std::string& s) {
  if (s == "iid_mixture") return ProcessKind::iid_mixture;
  if (s == "iid_continuous") return ProcessKind::iid_continuous;
  if (s == "iid_discrete") return ProcessKind::iid_discrete;
  if (s == "piecewise_constant_markov") return ProcessKind::piecewise_constant_markov;
  throw SpecError("unknown process kind: " + s);
}

ContinuousFamily family_from_string(const std::string& s) {
  if (s == "uniform") return ContinuousFamily::uniform;
  if (s == "truncated_gaussian") return ContinuousFamily::truncated_gaussian;
  throw SpecError("unknown continuous family: " + s);
}

}  // namespace

nlohmann::json ProcessSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["p"] = p;
  if (continuous) {
    nlohmann::json c;
    c["family"] = to_string(continuous->family);
    c["support_low"] = continuous->support_low;
    c["support_high"] = continuous->support_high;
    if (continuous->family == ContinuousFamily::truncated_gaussian) {
      c["mean"] = continuous->mean;
      c["stddev"] = continuous->stddev;
    }
    j["continuous"] = c;
  }
  if (kind == ProcessKind::iid_discrete) {
    nlohmann::json pmf = nlohmann::json::array();
    for (const auto& a : discrete_pmf) pmf.push_back({a.value, a.prob});
    j["discrete_pmf"] = pmf;
  }
  if (kind == ProcessKind::iid_mixture) j["atom"] = atom;
  return j;
}

ProcessSpec ProcessSpec::from_json(const nlohmann::json& j) {
  ProcessSpec spec;
  spec.kind = kind_from_string(j.at("kind").get<std::string>());
  spec.p = j.value("p", 1.0);
  if (j.contains("continuous")) {
    const auto& c = j.at("continuous");
    ContinuousSpec cs;
    cs.family = family_from_string(c.at("family").get<std::string>());
    cs.support_low = c.at("support_low").get<double>();
    cs.support_high = c.at("support_high").get<double>();
    cs.mean = c.value("mean", 0.0);
    cs.stddev = c.value("stddev", 1.0);
    spec.continuous = cs;
  }
  if (j.contains("discrete_pmf")) {
    for (const auto& row : j.at("discrete_pmf"))
      spec.discrete_pmf.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
  }
  spec.atom = j.value("atom", 0.0);
  return spec;
}

}  // namespace dimlab
