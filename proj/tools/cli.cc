#include "cli.h"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "CLI11.hpp"
#include "dsim/domain.h"
#include "dsim/errors.h"
#include "dsim/io.h"
#include "dsim/rebalance.h"
#include "dsim/selection.h"
#include "dsim/similarity.h"
#include "report_json.h"

namespace dsim::tools {
namespace {

namespace fs = std::filesystem;

struct AggregateArgs {
  std::string features;
  std::string out;
  std::string format = "auto";
};

struct EmdArgs {
  std::string source;
  std::string target;
  double gamma = kDefaultGamma;
  std::string flows;
};

struct SelectArgs {
  std::string source;
  std::string target;
  std::size_t k = 0;
  double gamma = kDefaultGamma;
  std::string out;
  std::string target_id;
};

struct SelectMultiArgs {
  std::string source;
  std::vector<std::string> targets;
  std::vector<std::size_t> ks;
  double gamma = kDefaultGamma;
  std::string out;
  std::string reports;
};

struct RebalanceArgs {
  std::string index;
  std::uint64_t cap = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct SplitArgs {
  std::string index;
  std::uint64_t threshold = 100;
  std::string head_out;
  std::string tail_out;
};

struct ReportArgs {
  std::vector<std::string> centroids;
  std::string index;
  std::uint64_t threshold = 100;
  std::string out;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string JoinLines(const std::vector<std::string>& ids) {
  std::string text;
  for (const auto& id : ids) {
    text += id;
    text += '\n';
  }
  return text;
}

int RunAggregate(const AggregateArgs& a, std::ostream& out) {
  FeatureFormat format = FeatureFormat::kAuto;
  if (a.format == "csv") format = FeatureFormat::kCsv;
  if (a.format == "bin") format = FeatureFormat::kBinary;
  const auto records = LoadFeatures(a.features, format);
  const Domain domain = BuildDomain(records);
  SaveCentroids(domain, a.out);
  out << "records " << records.size() << "\n"
      << "categories " << domain.size() << "\n"
      << "dim " << domain.dim() << "\n";
  return kExitOk;
}

int RunEmd(const EmdArgs& a, std::ostream& out) {
  const SimilarityConfig config{a.gamma};
  ValidateConfig(config);
  const Domain source = LoadCentroids(a.source);
  const Domain target = LoadCentroids(a.target);
  const DomainComparison cmp = CompareDomains(source, target);
  out << "distance " << FormatFixed6(cmp.distance) << "\n"
      << "similarity " << FormatFixed6(SimilarityFromDistance(cmp.distance, config))
      << "\n";
  if (!a.flows.empty()) {
    std::string csv = "source_id,target_id,flow,cost\n";
    for (std::size_t i = 0; i < source.size(); ++i) {
      for (std::size_t j = 0; j < target.size(); ++j) {
        const double f = cmp.plan.flow(i, j);
        if (f < kNegligibleMass) continue;
        csv += source[i].category_id + "," + target[j].category_id + "," +
               FormatExact(f) + "," + FormatExact(cmp.problem.cost(i, j)) + "\n";
      }
    }
    WriteFileAtomically(a.flows, csv);
  }
  return kExitOk;
}

int RunSelect(const SelectArgs& a, std::ostream& out, std::ostream& err) {
  const SimilarityConfig config{a.gamma};
  ValidateConfig(config);
  const Domain source = LoadCentroids(a.source);
  const Domain target = LoadCentroids(a.target);
  const std::string target_id =
      a.target_id.empty() ? fs::path(a.target).stem().string() : a.target_id;
  const SelectionReport report =
      SelectTopK(source, target, a.k, config, target_id);
  if (report.truncated()) {
    err << "warning: k=" << a.k << " exceeds the " << source.size()
        << " source categories; selecting all of them\n";
  }
  WriteFileAtomically(a.out, SelectionReportToJson(report).dump(2) + "\n");
  for (std::size_t i = 0; i < report.selected.size(); ++i) {
    out << (i + 1) << "\t" << report.ranked[i].category_id << "\t"
        << FormatFixed6(report.ranked[i].similarity) << "\n";
  }
  return kExitOk;
}

int RunSelectMulti(const SelectMultiArgs& a, std::ostream& out,
                   std::ostream& err) {
  if (a.targets.size() != a.ks.size()) {
    throw UsageError("every --target needs a matching --k (got " +
                     std::to_string(a.targets.size()) + " targets, " +
                     std::to_string(a.ks.size()) + " k values)");
  }
  const SimilarityConfig config{a.gamma};
  ValidateConfig(config);
  const Domain source = LoadCentroids(a.source);
  std::vector<SelectionTarget> targets;
  targets.reserve(a.targets.size());
  for (std::size_t t = 0; t < a.targets.size(); ++t) {
    targets.push_back({fs::path(a.targets[t]).stem().string(),
                       LoadCentroids(a.targets[t]), a.ks[t]});
  }
  const UnionSelection selection = SelectUnion(source, targets, config);
  for (const auto& r : selection.reports) {
    if (r.truncated()) {
      err << "warning: k=" << r.k << " for target '" << r.target_id
          << "' exceeds the " << source.size() << " source categories\n";
    }
  }
  WriteFileAtomically(a.out, JoinLines(selection.category_ids));
  if (!a.reports.empty()) {
    WriteFileAtomically(a.reports,
                        UnionSelectionToJson(selection, a.gamma).dump(2) + "\n");
  }
  for (const auto& r : selection.reports) {
    out << r.target_id << "\tk=" << r.k << "\tselected=" << r.selected.size()
        << "\n";
  }
  out << "union " << selection.category_ids.size() << "\n";
  return kExitOk;
}

int RunRebalance(const RebalanceArgs& a, std::ostream& out) {
  const CategoryCounts counts = LoadIndex(a.index);
  const SubsetManifest manifest = BalancedSubset(counts, a.cap, a.seed);
  WriteFileAtomically(a.out, EncodeManifestCsv(manifest));
  const CategoryCounts kept = RetainedCounts(manifest);
  std::uint64_t before = 0, after = 0;
  for (const auto& [id, n] : counts.counts) before += n;
  for (const auto& [id, n] : kept.counts) after += n;
  out << "categories " << manifest.entries.size() << "\n"
      << "images " << before << " -> " << after << "\n"
      << "imbalance " << FormatFixed6(ImbalanceRatio(counts)) << " -> "
      << FormatFixed6(ImbalanceRatio(kept)) << "\n";
  return kExitOk;
}

int RunSplit(const SplitArgs& a, std::ostream& out) {
  const CategoryCounts counts = LoadIndex(a.index);
  const HeadTailSplit split = PartitionHeadTail(counts, a.threshold);
  if (!a.head_out.empty()) WriteFileAtomically(a.head_out, JoinLines(split.head));
  if (!a.tail_out.empty()) WriteFileAtomically(a.tail_out, JoinLines(split.tail));
  out << "# head (count >= " << a.threshold << "): " << split.head.size() << "\n"
      << JoinLines(split.head) << "# tail (count < " << a.threshold
      << "): " << split.tail.size() << "\n"
      << JoinLines(split.tail);
  return kExitOk;
}

Json CountsSummary(const std::map<std::string, std::uint64_t>& counts) {
  if (counts.empty()) return nullptr;
  std::uint64_t lo = counts.begin()->second, hi = lo;
  for (const auto& [id, n] : counts) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  if (lo == 0) return nullptr;
  return static_cast<double>(hi) / static_cast<double>(lo);
}

int RunReport(const ReportArgs& a, std::ostream& out) {
  if (a.centroids.empty() && a.index.empty()) {
    throw UsageError("report needs at least one --centroids or --index");
  }
  Json domains = Json::array();
  for (const auto& path : a.centroids) {
    std::vector<std::string> dropped;
    const Domain d = LoadCentroids(path, &dropped);
    std::map<std::string, std::uint64_t> counts;
    for (const auto& c : d.centroids()) counts[c.category_id] = c.count;
    domains.push_back({{"path", path},
                       {"categories", d.size()},
                       {"dim", d.dim()},
                       {"total_count", d.total_count()},
                       {"imbalance_ratio", CountsSummary(counts)},
                       {"dropped_zero_count", dropped.size()},
                       {"dropped_zero_categories", dropped}});
  }
  Json index = nullptr;
  if (!a.index.empty()) {
    const CategoryCounts counts = LoadIndex(a.index);
    std::vector<std::string> zero;
    std::map<std::string, std::uint64_t> nonzero;
    std::uint64_t total = 0;
    for (const auto& [id, n] : counts.counts) {
      total += n;
      if (n == 0) {
        zero.push_back(id);
      } else {
        nonzero[id] = n;
      }
    }
    const HeadTailSplit split =
        PartitionHeadTail(CategoryCounts::FromCounts(nonzero), a.threshold);
    index = {{"path", a.index},
             {"categories", nonzero.size()},
             {"total_images", total},
             {"imbalance_ratio", CountsSummary(nonzero)},
             {"threshold", a.threshold},
             {"head_categories", split.head.size()},
             {"tail_categories", split.tail.size()},
             {"dropped_zero_count", zero.size()},
             {"dropped_zero_categories", zero}};
  }
  const Json report = {{"domains", std::move(domains)}, {"index", std::move(index)}};
  const std::string text = report.dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    WriteFileAtomically(a.out, text);
  }
  return kExitOk;
}

}  // namespace

int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Domain similarity and source-category selection toolkit",
               "dsim"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  AggregateArgs aggregate;
  auto* aggregate_cmd =
      app.add_subcommand("aggregate", "Feature table -> centroid file");
  aggregate_cmd->add_option("--features", aggregate.features)->required();
  aggregate_cmd->add_option("--out", aggregate.out)->required();
  aggregate_cmd->add_option("--format", aggregate.format)
      ->check(CLI::IsMember({"auto", "csv", "bin"}));

  EmdArgs emd;
  auto* emd_cmd = app.add_subcommand("emd", "Domain distance and similarity");
  emd_cmd->add_option("--source", emd.source)->required();
  emd_cmd->add_option("--target", emd.target)->required();
  emd_cmd->add_option("--gamma", emd.gamma)->check(CLI::PositiveNumber);
  emd_cmd->add_option("--flows", emd.flows, "Optional flow dump CSV");

  SelectArgs select;
  auto* select_cmd =
      app.add_subcommand("select", "Top-k source categories for one target");
  select_cmd->add_option("--source", select.source)->required();
  select_cmd->add_option("--target", select.target)->required();
  select_cmd->add_option("--k", select.k)->required()->check(CLI::PositiveNumber);
  select_cmd->add_option("--gamma", select.gamma)->check(CLI::PositiveNumber);
  select_cmd->add_option("--out", select.out)->required();
  select_cmd->add_option("--target-id", select.target_id,
                         "Label for the report (default: target file stem)");

  SelectMultiArgs multi;
  auto* multi_cmd = app.add_subcommand(
      "select-multi", "Deduplicated union of per-target top-k selections");
  multi_cmd->add_option("--source", multi.source)->required();
  multi_cmd->add_option("--target", multi.targets)->required();
  multi_cmd->add_option("--k", multi.ks)->required()->check(CLI::PositiveNumber);
  multi_cmd->add_option("--gamma", multi.gamma)->check(CLI::PositiveNumber);
  multi_cmd->add_option("--out", multi.out)->required();
  multi_cmd->add_option("--reports", multi.reports,
                        "Optional JSON with every per-target report");

  RebalanceArgs rebalance;
  auto* rebalance_cmd =
      app.add_subcommand("rebalance", "Capped per-category sampling");
  rebalance_cmd->add_option("--index", rebalance.index)->required();
  rebalance_cmd->add_option("--cap", rebalance.cap)
      ->required()
      ->check(CLI::PositiveNumber);
  rebalance_cmd->add_option("--seed", rebalance.seed)->required();
  rebalance_cmd->add_option("--out", rebalance.out)->required();

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "Head/tail category partition");
  split_cmd->add_option("--index", split.index)->required();
  split_cmd->add_option("--threshold", split.threshold)
      ->check(CLI::PositiveNumber);
  split_cmd->add_option("--head-out", split.head_out);
  split_cmd->add_option("--tail-out", split.tail_out);

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "JSON summary of inputs");
  report_cmd->add_option("--centroids", report.centroids);
  report_cmd->add_option("--index", report.index);
  report_cmd->add_option("--threshold", report.threshold)
      ->check(CLI::PositiveNumber);
  report_cmd->add_option("--out", report.out);

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (aggregate_cmd->parsed()) return RunAggregate(aggregate, out);
    if (emd_cmd->parsed()) return RunEmd(emd, out);
    if (select_cmd->parsed()) return RunSelect(select, out, err);
    if (multi_cmd->parsed()) return RunSelectMulti(multi, out, err);
    if (rebalance_cmd->parsed()) return RunRebalance(rebalance, out);
    if (split_cmd->parsed()) return RunSplit(split, out);
    if (report_cmd->parsed()) return RunReport(report, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dsim::tools
