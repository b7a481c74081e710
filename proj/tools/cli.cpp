#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaugeword/error.hpp"
#include "gaugeword/explore.hpp"
#include "gaugeword/format.hpp"
#include "gaugeword/gauge.hpp"
#include "gaugeword/io.hpp"
#include "gaugeword/lsa.hpp"
#include "gaugeword/optimize.hpp"
#include "manifest.hpp"

namespace gaugeword::cli {
namespace {

using nlohmann::json;

struct AlphaRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

std::optional<AlphaRange> parse_alpha_range(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) return std::nullopt;
  try {
    AlphaRange r{parse_real(text.substr(0, a)),
                 parse_real(text.substr(a + 1, b - a - 1)),
                 parse_real(text.substr(b + 1))};
    if (!std::isfinite(r.start) || !std::isfinite(r.stop) ||
        !(r.step > 0.0) || !(r.stop >= r.start)) {
      return std::nullopt;
    }
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json report_json(const EvalReport& r) {
  return {{"testset", r.testset},
          {"method", std::string(to_string(r.method))},
          {"score", r.score},
          {"pairs_used", r.pairs_used},
          {"pairs_skipped_oov", r.pairs_skipped_oov},
          {"pairs_skipped_zero", r.pairs_skipped_zero}};
}

json warnings_json(const std::vector<Warning>& warnings) {
  json out = json::array();
  for (const auto& w : warnings) {
    out.push_back({{"code", std::string(to_string(w.code))},
                   {"message", w.message}});
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

const std::vector<std::string> kFormats{"auto", "word2vec", "glove"};
const std::vector<std::string> kMethods{"spearman", "pearson"};

struct Common {
  std::string format = "auto";
  std::uint64_t seed = 0;
};

struct BuildLsaArgs {
  std::string corpus, out_v, out_u, out_sigma, out_dtm;
  long dim = 0;
  double alpha = 0.0;
  std::size_t min_count = 1;
  std::size_t max_vocab = kDefaultMaxVocab;
};

struct TransformArgs {
  std::string v, u, kind, matrix, out, out_u;
};

struct CanonicalizeArgs {
  std::string v, u, out_v, out_u, report;
};

struct WhitenArgs {
  std::string v, out;
};

struct TieArgs {
  std::string v, u, mode, out, out_u, report;
};

struct EvaluateArgs {
  std::string v, method = "spearman", oov = "skip", out;
  std::vector<std::string> testsets;
};

struct SweepArgs {
  std::string v, lambda, alphas, method = "spearman", out, sigma;
  std::vector<std::string> testsets;
};

struct StudyArgs {
  std::string v, kind, testset, method = "spearman", out;
  std::size_t runs = 0;
};

struct OptimizeArgs {
  std::string v, testset, method = "spearman", out, slice = "diagonal", out_v;
  std::size_t kfold = 0;
  std::size_t max_evals = 0;
  double ftol = 1e-8;
  double step = 0.1;
};

VectorFormat format_of(const Common& c) {
  return *parse_vector_format(c.format);
}

VectorFormat output_format(const Common& c) {
  const auto f = format_of(c);
  return f == VectorFormat::auto_detect ? VectorFormat::glove : f;
}

int cmd_build_lsa(const BuildLsaArgs& a, const Common& c, RunManifest& m,
                  std::ostream& out) {
  m.add_input(a.corpus);
  const TokenizedCorpus corpus = read_corpus_file(a.corpus);
  const DocTermMatrix dtm = build_doc_term(corpus, a.min_count, a.max_vocab);
  const LsaSolution lsa = lsa_solve(dtm.counts, a.dim, a.alpha);

  save_embedding_text(Embedding(dtm.vocab, lsa.pair.v), a.out_v,
                      output_format(c));
  m.add_output(a.out_v);
  if (!a.out_u.empty()) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      labels.push_back("doc" + std::to_string(i));
    }
    save_context_text(lsa.pair.u, a.out_u, output_format(c), labels);
    m.add_output(a.out_u);
  }
  if (!a.out_sigma.empty()) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < lsa.sigma.size(); ++i) {
      os << format_real(lsa.sigma(i)) << '\n';
    }
    write_text(a.out_sigma, os.str());
    m.add_output(a.out_sigma);
  }
  if (!a.out_dtm.empty()) {
    std::ofstream f(a.out_dtm, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + a.out_dtm);
    write_doc_term_csv(dtm, f);
    m.add_output(a.out_dtm);
  }
  json summary{{"documents", dtm.counts.rows()},
               {"vocab", dtm.vocab.size()},
               {"dim", a.dim},
               {"alpha", a.alpha},
               {"sigma", vector_json(lsa.sigma)},
               {"reconstruction_error", reconstruction_error(dtm.counts, lsa.pair)},
               {"warnings", warnings_json(lsa.warnings)}};
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_transform(const TransformArgs& a, const Common& c, RunManifest& m,
                  std::ostream& out) {
  const TransformKind kind = *parse_transform_kind(a.kind);
  m.add_input(a.v);
  LoadedEmbedding loaded = [&] {
    if (a.u.empty()) return load_embedding_text(a.v, format_of(c));
    m.add_input(a.u);
    return load_embedding_pair(a.v, a.u, format_of(c));
  }();
  const Embedding& emb = loaded.embedding;

  std::optional<Transform> t;
  if (!a.matrix.empty()) {
    m.add_input(a.matrix);
    t.emplace(read_matrix_csv(a.matrix), kind);
  } else {
    m.set_seed(c.seed);
    t.emplace(sample_transform(kind, emb.dim(), c.seed));
  }
  if (t->dim() != emb.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "transform is " + std::to_string(t->dim()) +
                    "-dimensional but the embedding has d = " +
                    std::to_string(emb.dim()));
  }

  if (emb.u()) {
    const FactorPair moved = apply_transform(*t, FactorPair{*emb.u(), emb.v()});
    save_embedding_text(emb.with_v(moved.v), a.out, output_format(c));
    m.add_output(a.out);
    if (!a.out_u.empty()) {
      save_context_text(moved.u, a.out_u, output_format(c));
      m.add_output(a.out_u);
    }
  } else {
    save_embedding_text(emb.with_v(apply_transform(*t, emb.v())), a.out,
                        output_format(c));
    m.add_output(a.out);
  }
  out << json{{"kind", std::string(to_string(kind))},
              {"dim", t->dim()},
              {"matrix", matrix_json(t->matrix())}}
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_canonicalize(const CanonicalizeArgs& a, const Common& c,
                     RunManifest& m, std::ostream& out) {
  m.add_input(a.v);
  m.add_input(a.u);
  const LoadedEmbedding loaded = load_embedding_pair(a.v, a.u, format_of(c));
  const Embedding& emb = loaded.embedding;
  const CanonicalPair canon = canonicalize(FactorPair{*emb.u(), emb.v()});

  save_embedding_text(emb.with_v(canon.pair.v), a.out_v, output_format(c));
  m.add_output(a.out_v);
  save_context_text(canon.pair.u, a.out_u, output_format(c));
  m.add_output(a.out_u);

  json degenerate = json::array();
  for (bool g : canon.degenerate_gap) degenerate.push_back(g);
  json zero = json::array();
  for (bool z : canon.zero_column) zero.push_back(z);
  const json report{{"dim", emb.dim()},
                    {"n", emb.u()->rows()},
                    {"p", emb.size()},
                    {"spectrum", vector_json(canon.spectrum)},
                    {"degenerate", canon.degenerate()},
                    {"degenerate_gap", degenerate},
                    {"zero_column", zero},
                    {"product_residual", canon.product_residual},
                    {"warnings", warnings_json(canon.warnings)}};
  write_json(a.report, report);
  m.add_output(a.report);
  out << report.dump() << '\n';
  return kExitOk;
}

int cmd_whiten(const WhitenArgs& a, const Common& c, RunManifest& m,
               std::ostream& out) {
  m.add_input(a.v);
  const LoadedEmbedding loaded = load_embedding_text(a.v, format_of(c));
  const Embedding& emb = loaded.embedding;
  save_embedding_text(emb.with_v(whiten(emb.v())), a.out, output_format(c));
  m.add_output(a.out);
  out << json{{"dim", emb.dim()}, {"p", emb.size()}}.dump() << '\n';
  return kExitOk;
}

int cmd_tie(const TieArgs& a, const Common& c, RunManifest& m,
            std::ostream& out) {
  m.add_input(a.v);
  m.add_input(a.u);
  const LoadedEmbedding loaded = load_embedding_pair(a.v, a.u, format_of(c));
  const Embedding& emb = loaded.embedding;
  const FactorPair pair{*emb.u(), emb.v()};
  json report{{"mode", a.mode}};
  if (a.mode == "sum") {
    save_embedding_text(emb.with_v(sum_tie(pair)), a.out, output_format(c));
    m.add_output(a.out);
  } else {
    const TieResult tie = symmetric_tie(pair);
    save_embedding_text(emb.with_v(tie.v_tied), a.out, output_format(c));
    m.add_output(a.out);
    if (!a.out_u.empty()) {
      save_context_text(tie.u_tied, a.out_u, output_format(c));
      m.add_output(a.out_u);
    }
    report["residual"] = tie.residual;
    report["c"] = matrix_json(tie.c.matrix());
  }
  if (!a.report.empty()) {
    write_json(a.report, report);
    m.add_output(a.report);
  }
  out << report.dump() << '\n';
  return kExitOk;
}

int cmd_evaluate(const EvaluateArgs& a, const Common& c, RunManifest& m,
                 std::ostream& out) {
  m.add_input(a.v);
  const LoadedEmbedding loaded = load_embedding_text(a.v, format_of(c));
  const CorrelationMethod method = *parse_method(a.method);
  json reports = json::array();
  for (const auto& path : a.testsets) {
    m.add_input(path);
    reports.push_back(
        report_json(evaluate(loaded.embedding, read_testset_file(path), method)));
  }
  const json result{{"embedding", a.v},
                    {"duplicates_dropped", loaded.duplicates_dropped},
                    {"reports", reports}};
  if (!a.out.empty()) {
    write_json(a.out, result);
    m.add_output(a.out);
  }
  out << result.dump() << '\n';
  return kExitOk;
}

Transform sweep_lambda(const SweepArgs& a, const Common& c,
                       const Embedding& emb, RunManifest& m,
                       std::string& label) {
  const Eigen::Index d = emb.dim();
  if (a.lambda.rfind("file:", 0) == 0) {
    const std::string path = a.lambda.substr(5);
    m.add_input(path);
    label = a.lambda;
    const Vector diag = read_vector_text(path);
    if (diag.size() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  path + " has " + std::to_string(diag.size()) +
                      " entries, expected " + std::to_string(d));
    }
    return Transform::diagonal(diag);
  }
  Vector sigma;
  if (!a.sigma.empty()) {
    m.add_input(a.sigma);
    sigma = read_vector_text(a.sigma);
    if (sigma.size() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  "--sigma has " + std::to_string(sigma.size()) +
                      " entries, expected " + std::to_string(d));
    }
  } else {
    sigma = svd_thin(emb.v(), d).sigma;
  }
  m.set_seed(c.seed);
  label = a.lambda;
  for (auto& [name, t] : lambda_presets(d, sigma, c.seed)) {
    if (name == a.lambda) return t;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown Lambda preset " + a.lambda);
}

int cmd_sweep(const SweepArgs& a, const Common& c, RunManifest& m,
              std::ostream& out) {
  m.add_input(a.v);
  const LoadedEmbedding loaded = load_embedding_text(a.v, format_of(c));
  std::string label;
  const Transform lambda = sweep_lambda(a, c, loaded.embedding, m, label);
  const AlphaRange range = *parse_alpha_range(a.alphas);
  std::vector<SimilarityTestSet> testsets;
  for (const auto& path : a.testsets) {
    m.add_input(path);
    testsets.push_back(read_testset_file(path));
  }
  const SweepResult result =
      alpha_sweep(loaded.embedding, lambda, label,
                  alpha_grid(range.start, range.stop, range.step), testsets,
                  {*parse_method(a.method)});
  std::ostringstream csv;
  emit_csv(result, csv);
  write_text(a.out, csv.str());
  m.add_output(a.out);
  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.score ? 0 : 1;
  out << json{{"rows", result.rows.size()}, {"failed_rows", failed}}.dump()
      << '\n';
  return kExitOk;
}

int cmd_study(const StudyArgs& a, const Common& c, RunManifest& m,
              std::ostream& out) {
  m.add_input(a.v);
  m.add_input(a.testset);
  m.set_seed(c.seed);
  const LoadedEmbedding loaded = load_embedding_text(a.v, format_of(c));
  const TrialDistribution dist = random_transform_study(
      loaded.embedding, *parse_transform_kind(a.kind), a.runs, c.seed,
      read_testset_file(a.testset), *parse_method(a.method));
  std::ostringstream csv;
  emit_csv(dist, csv);
  write_text(a.out, csv.str());
  m.add_output(a.out);
  json summary{{"base_score", dist.base_score},
               {"runs", a.runs},
               {"succeeded", dist.scores().size()}};
  if (dist.summary) {
    summary["mean"] = dist.summary->mean;
    summary["sd"] = dist.summary->sd;
    summary["min"] = dist.summary->min;
    summary["max"] = dist.summary->max;
  }
  out << summary.dump() << '\n';
  return kExitOk;
}

json opt_result_json(const DiagOptResult& r) {
  json j{{"init_score", r.init_score},
         {"train_score", r.train_score},
         {"evals_used", r.evals_used},
         {"kind", std::string(to_string(r.lambda_star.kind()))}};
  if (r.lambda_star.kind() == TransformKind::diagonal) {
    j["lambda"] = vector_json(r.lambda_star.matrix().diagonal());
  } else {
    j["lambda"] = matrix_json(r.lambda_star.matrix());
  }
  if (r.holdout_score) j["holdout_score"] = *r.holdout_score;
  return j;
}

int cmd_optimize(const OptimizeArgs& a, const Common& c, RunManifest& m,
                 std::ostream& out) {
  m.add_input(a.v);
  m.add_input(a.testset);
  m.set_seed(c.seed);
  const LoadedEmbedding loaded = load_embedding_text(a.v, format_of(c));
  const SimilarityTestSet testset = read_testset_file(a.testset);
  const CorrelationMethod method = *parse_method(a.method);
  OptimizerOptions opts;
  opts.max_evals = a.max_evals;
  opts.ftol = a.ftol;
  opts.initial_step = a.step;
  const GaugeSlice slice = a.slice == "upper" ? GaugeSlice::upper_triangular
                                              : GaugeSlice::diagonal;

  json result{{"testset", testset.name},
              {"method", a.method},
              {"dim", loaded.embedding.dim()},
              {"slice", a.slice},
              {"seed", c.seed}};
  const DiagOptResult full =
      optimize_diag(loaded.embedding, testset, method, opts, slice);
  result["full"] = opt_result_json(full);
  if (a.kfold > 0) {
    const CrossValidationResult cv = cross_validated_optimize(
        loaded.embedding, testset, method, a.kfold, c.seed, opts, slice);
    json folds = json::array();
    for (const auto& f : cv.folds) {
      json fj = opt_result_json(f.result);
      fj["fold"] = f.fold;
      fj["train_pairs"] = f.train_pairs;
      fj["holdout_pairs"] = f.holdout_pairs;
      folds.push_back(std::move(fj));
    }
    result["kfold"] = a.kfold;
    result["folds"] = folds;
    result["mean_holdout"] = cv.mean_holdout ? json(*cv.mean_holdout) : json(nullptr);
  }
  write_json(a.out, result);
  m.add_output(a.out);
  if (!a.out_v.empty()) {
    save_embedding_text(
        loaded.embedding.with_v(apply_transform(full.lambda_star, loaded.embedding.v())),
        a.out_v, output_format(c));
    m.add_output(a.out_v);
  }
  out << result.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"gaugeword: gauge freedom of word-embedding factorizations",
               "gaugeword"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  auto add_common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--format", common.format,
                    "Vector file format for input and output")
        ->check(CLI::IsMember(kFormats))
        ->capture_default_str();
    if (seeded) {
      sub->add_option("--seed", common.seed,
                      "RNG seed (default: $GAUGEWORD_SEED or 0)")
          ->envname("GAUGEWORD_SEED");
    }
  };

  BuildLsaArgs lsa;
  auto* build = app.add_subcommand("build-lsa", "Build LSA embeddings from a corpus");
  build->add_option("--corpus", lsa.corpus, "Text corpus, one document per line")
      ->required()->check(CLI::ExistingFile);
  build->add_option("--dim", lsa.dim, "Embedding dimension d")
      ->required()->check(CLI::PositiveNumber);
  build->add_option("--alpha", lsa.alpha, "Split exponent: U = A S^a, V = S^(1-a) B^T")
      ->capture_default_str();
  build->add_option("--min-count", lsa.min_count, "Minimum corpus count")
      ->check(CLI::PositiveNumber)->capture_default_str();
  build->add_option("--max-vocab", lsa.max_vocab, "Vocabulary cap (0 = none)")
      ->capture_default_str();
  build->add_option("--out-v", lsa.out_v, "Output word vectors")->required();
  build->add_option("--out-u", lsa.out_u, "Output document (context) vectors");
  build->add_option("--out-sigma", lsa.out_sigma, "Output leading singular values");
  build->add_option("--out-dtm", lsa.out_dtm, "Output document-term CSV");
  add_common(build, false);

  const std::vector<std::string> kinds_all{"diagonal", "upper", "orthogonal",
                                           "general"};
  TransformArgs tr;
  auto* transform = app.add_subcommand("transform", "Apply a gauge transform C");
  transform->add_option("--v", tr.v, "Word vectors")->required()->check(CLI::ExistingFile);
  transform->add_option("--u", tr.u, "Context vectors")->check(CLI::ExistingFile);
  transform->add_option("--kind", tr.kind, "Transform class")
      ->required()->check(CLI::IsMember(kinds_all));
  auto* matrix_opt = transform->add_option("--matrix", tr.matrix, "d x d CSV matrix")
                         ->check(CLI::ExistingFile);
  transform->add_option("--out", tr.out, "Output word vectors")->required();
  transform->add_option("--out-u", tr.out_u, "Output context vectors")->needs("--u");
  add_common(transform, true);
  transform->get_option("--seed")->excludes(matrix_opt);

  CanonicalizeArgs can;
  auto* canon = app.add_subcommand("canonicalize",
                                   "Map a factor pair to its unique canonical form");
  canon->add_option("--v", can.v, "Word vectors")->required()->check(CLI::ExistingFile);
  canon->add_option("--u", can.u, "Context vectors")->required()->check(CLI::ExistingFile);
  canon->add_option("--out-v", can.out_v, "Output word vectors")->required();
  canon->add_option("--out-u", can.out_u, "Output context vectors")->required();
  canon->add_option("--report", can.report, "JSON report")->required();
  add_common(canon, false);

  WhitenArgs wh;
  auto* whiten_cmd = app.add_subcommand("whiten", "Impose V V^T = I using V alone");
  whiten_cmd->add_option("--v", wh.v, "Word vectors")->required()->check(CLI::ExistingFile);
  whiten_cmd->add_option("--out", wh.out, "Output word vectors")->required();
  add_common(whiten_cmd, false);

  TieArgs tie;
  auto* tie_cmd = app.add_subcommand("tie", "Tie U^T and V for symmetric corpora");
  tie_cmd->add_option("--v", tie.v, "Word vectors")->required()->check(CLI::ExistingFile);
  tie_cmd->add_option("--u", tie.u, "Context vectors")->required()->check(CLI::ExistingFile);
  tie_cmd->add_option("--mode", tie.mode, "solve: C^{-T}U^T = CV; sum: U^T + V")
      ->required()->check(CLI::IsMember({"solve", "sum"}));
  tie_cmd->add_option("--out", tie.out, "Output word vectors")->required();
  tie_cmd->add_option("--out-u", tie.out_u, "Output context vectors (solve)");
  tie_cmd->add_option("--report", tie.report, "JSON report");
  add_common(tie_cmd, false);

  EvaluateArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score word vectors on similarity sets");
  eval_cmd->add_option("--v", ev.v, "Word vectors")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--testset", ev.testsets, "Similarity test set(s)")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--method", ev.method, "Correlation")
      ->check(CLI::IsMember(kMethods))->capture_default_str();
  eval_cmd->add_option("--oov", ev.oov, "Out-of-vocabulary policy")
      ->check(CLI::IsMember({"skip"}))->capture_default_str();
  eval_cmd->add_option("--out", ev.out, "JSON output");
  add_common(eval_cmd, false);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep-alpha", "Score Lambda^alpha V over an alpha grid");
  sweep->add_option("--v", sw.v, "Word vectors")->required()->check(CLI::ExistingFile);
  sweep->add_option("--lambda", sw.lambda,
                    "sigma | linear | uniform | absnormal | file:PATH")
      ->required()
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            if (s == "sigma" || s == "linear" || s == "uniform" ||
                s == "absnormal") {
              return {};
            }
            if (s.rfind("file:", 0) == 0 && s.size() > 5) {
              std::ifstream probe(s.substr(5));
              return probe ? std::string{} : "cannot open " + s.substr(5);
            }
            return "unknown Lambda choice '" + s + "'";
          },
          "LAMBDA"));
  sweep->add_option("--alphas", sw.alphas, "start:stop:step")
      ->required()
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            return parse_alpha_range(s) ? std::string{}
                                        : "expected start:stop:step with step > 0";
          },
          "A0:A1:STEP"));
  sweep->add_option("--testset", sw.testsets, "Similarity test set(s)")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--method", sw.method, "Correlation")
      ->check(CLI::IsMember(kMethods))->capture_default_str();
  sweep->add_option("--sigma", sw.sigma,
                    "Singular values for --lambda sigma (default: those of V)")
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", sw.out, "CSV output")->required();
  add_common(sweep, true);

  StudyArgs st;
  auto* study = app.add_subcommand("study-random",
                                   "Score R V for random transforms R");
  study->add_option("--v", st.v, "Word vectors")->required()->check(CLI::ExistingFile);
  study->add_option("--kind", st.kind, "Transform class")
      ->required()->check(CLI::IsMember({"diagonal", "upper", "orthogonal"}));
  study->add_option("--runs", st.runs, "Number of random transforms")->required();
  study->add_option("--testset", st.testset, "Similarity test set")
      ->required()->check(CLI::ExistingFile);
  study->add_option("--method", st.method, "Correlation")
      ->check(CLI::IsMember(kMethods))->capture_default_str();
  study->add_option("--out", st.out, "CSV output")->required();
  add_common(study, true);

  OptimizeArgs op;
  auto* optimize = app.add_subcommand("optimize-diag",
                                      "Maximize the score over diagonal Lambda");
  optimize->add_option("--v", op.v, "Word vectors")->required()->check(CLI::ExistingFile);
  optimize->add_option("--testset", op.testset, "Similarity test set")
      ->required()->check(CLI::ExistingFile);
  optimize->add_option("--method", op.method, "Correlation")
      ->check(CLI::IsMember(kMethods))->capture_default_str();
  optimize->add_option("--kfold", op.kfold, "Cross-validation folds (0 = off)")
      ->capture_default_str();
  optimize->add_option("--max-evals", op.max_evals,
                       "Evaluation budget (0 = 500 per parameter)")
      ->capture_default_str();
  optimize->add_option("--ftol", op.ftol, "Simplex spread tolerance")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  optimize->add_option("--step", op.step, "Initial simplex step (log scale)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  optimize->add_option("--slice", op.slice, "Search space")
      ->check(CLI::IsMember({"diagonal", "upper"}))->capture_default_str();
  optimize->add_option("--out", op.out, "JSON output")->required();
  optimize->add_option("--out-v", op.out_v, "Write Lambda* V");
  add_common(optimize, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (op.kfold == 1) {
      throw CLI::ValidationError("--kfold", "must be 0 or at least 2");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  RunManifest manifest(chosen->get_name(), args);
  try {
    int status = kExitOk;
    const std::string name = chosen->get_name();
    if (name == "build-lsa") status = cmd_build_lsa(lsa, common, manifest, out);
    else if (name == "transform") status = cmd_transform(tr, common, manifest, out);
    else if (name == "canonicalize") status = cmd_canonicalize(can, common, manifest, out);
    else if (name == "whiten") status = cmd_whiten(wh, common, manifest, out);
    else if (name == "tie") status = cmd_tie(tie, common, manifest, out);
    else if (name == "evaluate") status = cmd_evaluate(ev, common, manifest, out);
    else if (name == "sweep-alpha") status = cmd_sweep(sw, common, manifest, out);
    else if (name == "study-random") status = cmd_study(st, common, manifest, out);
    else if (name == "optimize-diag") status = cmd_optimize(op, common, manifest, out);
    manifest.emit(err);
    return status;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace gaugeword::cli
