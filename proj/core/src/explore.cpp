#include "gaugeword/explore.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gaugeword/error.hpp"
#include "gaugeword/format.hpp"
#include "gaugeword/gauge.hpp"

namespace gaugeword {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string score_field(const std::optional<double>& score) {
  return score ? format_real(*score) : std::string("nan");
}

double positive_draw(Rng& rng, bool uniform) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const double v = uniform ? unit(rng) : std::abs(normal(rng));
    if (v >= 1e-12) return v;
  }
}

}  // namespace

std::vector<double> alpha_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) ||
      !std::isfinite(stop)) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha grid needs start <= stop and step > 0");
  }
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double a = start + static_cast<double>(i) * step;
    if (a > stop + 1e-9 * step) break;
    out.push_back(a);
  }
  return out;
}

SweepResult alpha_sweep(const Embedding& base, const Transform& lambda,
                        const std::string& lambda_label,
                        const std::vector<double>& alphas,
                        const std::vector<SimilarityTestSet>& testsets,
                        const std::vector<CorrelationMethod>& methods) {
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "alphas must be strictly increasing");
    }
  }
  if (lambda.dim() != base.dim()) {
    throw Error(ErrorCode::ShapeMismatch,
                "Lambda dimension does not match the embedding");
  }
  std::vector<PreparedTask> tasks;
  tasks.reserve(testsets.size());
  for (const auto& ts : testsets) tasks.emplace_back(base, ts);

  SweepResult out;
  for (double alpha : alphas) {
    std::optional<Transform> power;
    std::string power_error;
    try {
      power = power_diag(lambda, alpha);
    } catch (const Error& e) {
      power_error = e.what();
    }
    for (std::size_t t = 0; t < testsets.size(); ++t) {
      std::optional<Matrix> scaled;
      if (power) scaled = apply_transform(*power, tasks[t].compact_v());
      for (CorrelationMethod method : methods) {
        SweepRow row{alpha, lambda_label, testsets[t].name, method, {}, {}};
        if (!scaled) {
          row.failure = power_error;
        } else {
          try {
            row.score = tasks[t].score(*scaled, method).score;
          } catch (const Error& e) {
            row.failure = e.what();
          }
        }
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

std::vector<NamedLambda> lambda_presets(Eigen::Index d, const Vector& sigma,
                                        std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
  if (sigma.size() != d) {
    throw Error(ErrorCode::ShapeMismatch, "sigma must have d entries");
  }
  std::vector<NamedLambda> out;
  out.emplace_back("sigma", Transform::diagonal(sigma));

  Vector linear(d);
  for (Eigen::Index i = 0; i < d; ++i) linear(i) = static_cast<double>(i + 1);
  out.emplace_back("linear", Transform::diagonal(linear));

  Rng rng(seed);
  Vector uniform(d);
  for (Eigen::Index i = 0; i < d; ++i) uniform(i) = positive_draw(rng, true);
  out.emplace_back("uniform", Transform::diagonal(uniform));

  Vector absnormal(d);
  for (Eigen::Index i = 0; i < d; ++i) absnormal(i) = positive_draw(rng, false);
  out.emplace_back("absnormal", Transform::diagonal(absnormal));
  return out;
}

std::vector<double> TrialDistribution::scores() const {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (t.score) out.push_back(*t.score);
  }
  return out;
}

std::optional<TrialSummary> summarize(const std::vector<double>& scores) {
  if (scores.empty()) return std::nullopt;
  TrialSummary s;
  s.count = scores.size();
  const double n = static_cast<double>(scores.size());
  double sum = 0.0;
  for (double v : scores) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : scores) ss += (v - s.mean) * (v - s.mean);
  s.sd = scores.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.min = *std::min_element(scores.begin(), scores.end());
  s.max = *std::max_element(scores.begin(), scores.end());
  return s;
}

TrialDistribution random_transform_study(const Embedding& base,
                                         TransformKind kind,
                                         std::size_t n_runs,
                                         std::uint64_t seed,
                                         const SimilarityTestSet& testset,
                                         CorrelationMethod method) {
  TrialDistribution out;
  out.kind = kind;
  out.testset = testset.name;
  out.method = method;
  out.seed = seed;

  const PreparedTask task(base, testset);
  out.base_score = task.score(method).score;
  out.trials.reserve(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) {
    Trial trial{i, {}, {}};
    try {
      const Transform r =
          sample_transform(kind, base.dim(), seed + static_cast<std::uint64_t>(i));
      trial.score = task.score(apply_transform(r, task.compact_v()), method).score;
    } catch (const Error& e) {
      trial.failure = std::string(to_string(e.code()));
    }
    out.trials.push_back(std::move(trial));
  }
  out.summary = summarize(out.scores());
  return out;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "alpha,lambda,testset,method,score\n";
  for (const auto& row : result.rows) {
    out << format_real(row.alpha) << ',' << csv_escape(row.lambda) << ','
        << csv_escape(row.testset) << ',' << to_string(row.method) << ','
        << score_field(row.score) << '\n';
  }
}

void emit_csv(const TrialDistribution& result, std::ostream& out) {
  out << "# seed=" << result.seed << '\n'
      << "# kind=" << to_string(result.kind) << '\n'
      << "# testset=" << result.testset << '\n'
      << "# method=" << to_string(result.method) << '\n'
      << "# base_score=" << format_real(result.base_score) << '\n';
  if (result.summary) {
    out << "# mean=" << format_real(result.summary->mean) << '\n'
        << "# sd=" << format_real(result.summary->sd) << '\n'
        << "# min=" << format_real(result.summary->min) << '\n'
        << "# max=" << format_real(result.summary->max) << '\n';
  }
  for (const auto& t : result.trials) {
    if (!t.score) out << "# failed=" << t.index << ':' << t.failure << '\n';
  }
  out << "trial,score\n";
  for (const auto& t : result.trials) {
    if (t.score) out << t.index << ',' << format_real(*t.score) << '\n';
  }
}

SweepResult read_sweep_csv(std::istream& in) {
  SweepResult out;
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("alpha,lambda,testset,method,score", 0) != 0) {
    throw Error(ErrorCode::MalformedLine, "sweep CSV header missing");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    const auto method = f.size() == 5 ? parse_method(f[3]) : std::nullopt;
    if (!method) {
      throw Error(ErrorCode::MalformedLine,
                  "sweep CSV line " + std::to_string(line_no));
    }
    SweepRow row{parse_real(f[0]), f[1], f[2], *method, {}, {}};
    if (f[4] == "nan") {
      row.failure = "failed";
    } else {
      row.score = parse_real(f[4]);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

TrialDistribution read_trials_csv(std::istream& in) {
  TrialDistribution out;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  auto value_of = [](const std::string& l, const std::string& key)
      -> std::optional<std::string> {
    const std::string prefix = "# " + key + "=";
    if (l.rfind(prefix, 0) != 0) return std::nullopt;
    return l.substr(prefix.size());
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!header) {
      if (auto v = value_of(line, "seed")) {
        out.seed = std::stoull(*v);
      } else if (auto v = value_of(line, "kind")) {
        const auto kind = parse_transform_kind(*v);
        if (!kind) throw Error(ErrorCode::MalformedLine, "unknown kind " + *v);
        out.kind = *kind;
      } else if (auto v = value_of(line, "testset")) {
        out.testset = *v;
      } else if (auto v = value_of(line, "method")) {
        const auto m = parse_method(*v);
        if (!m) throw Error(ErrorCode::MalformedLine, "unknown method " + *v);
        out.method = *m;
      } else if (auto v = value_of(line, "base_score")) {
        out.base_score = parse_real(*v);
      } else if (auto v = value_of(line, "failed")) {
        const auto colon = v->find(':');
        out.trials.push_back(
            {std::stoull(v->substr(0, colon)), {},
             colon == std::string::npos ? "" : v->substr(colon + 1)});
      } else if (line == "trial,score") {
        header = true;
      } else if (line[0] != '#') {
        throw Error(ErrorCode::MalformedLine,
                    "trials CSV line " + std::to_string(line_no));
      }
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 2) {
      throw Error(ErrorCode::MalformedLine,
                  "trials CSV line " + std::to_string(line_no));
    }
    out.trials.push_back({std::stoull(f[0]), parse_real(f[1]), {}});
  }
  if (!header) throw Error(ErrorCode::MalformedLine, "trials CSV header missing");
  std::sort(out.trials.begin(), out.trials.end(),
            [](const Trial& a, const Trial& b) { return a.index < b.index; });
  out.summary = summarize(out.scores());
  return out;
}

}  // namespace gaugeword
