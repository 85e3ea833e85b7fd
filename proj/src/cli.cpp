#include "polartomo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "polartomo/design_search.hpp"
#include "polartomo/io.hpp"
#include "polartomo/protocol_sim.hpp"
#include "polartomo/tomography.hpp"

namespace polartomo::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
};

FilterBank parse_bank(const std::string& text) {
  try {
    return make_filter_bank(io::parse_number_list(text));
  } catch (const std::exception& e) {
    throw UsageError("bad --filters '" + text + "': " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Splices key=value lines from a scenario file in as flags right after the
// subcommand token, so flags given on the command line win.
std::vector<std::string> expand_scenario(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (!path) return out;
  std::istringstream text(read_file(*path));
  std::vector<std::string> flags;
  try {
    for (const auto& item : CLI::ConfigINI().from_config(text)) {
      std::string value;
      for (std::size_t k = 0; k < item.inputs.size(); ++k) {
        value += (k ? "," : "") + item.inputs[k];
      }
      flags.push_back("--" + item.fullname() + "=" + value);
    }
  } catch (const CLI::Error& e) {
    throw UsageError("bad scenario file " + *path + ": " + e.what());
  }
  auto sub = std::find(out.begin(), out.end(), "simulate");
  if (sub == out.end()) throw UsageError("--config is only accepted by simulate");
  out.insert(sub + 1, flags.begin(), flags.end());
  return out;
}

// ---------------------------------------------------------------- codebook

struct CodebookArgs {
  std::size_t n = 0;
  std::string filters;
  int photons = 0;
};

int cmd_codebook(const CodebookArgs& a, const Common& c, std::ostream& out,
                 std::ostream& err) {
  const auto codebook =
      build_codebook(AngleSet(a.n), parse_bank(a.filters), PhotonBudget(a.photons));
  if (c.format == "json") {
    out << io::codebook_to_json(codebook);
  } else {
    io::write_codebook_csv(out, codebook);
  }
  if (!codebook.is_unique()) {
    err << CodebookNotDecodable({codebook.collisions().begin(),
                                 codebook.collisions().end()})
               .what()
        << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ decode

struct DecodeArgs {
  std::string codebook_path;
  std::string vector;
};

int cmd_decode(const DecodeArgs& a, const Common& c, std::ostream& out) {
  const auto codebook = io::codebook_from_json(read_file(a.codebook_path));
  IntensityVector v;
  try {
    v = io::parse_intensity_vector(a.vector);
  } catch (const io::ParseError& e) {
    throw UsageError(std::string("bad --vector: ") + e.what());
  }
  if (v.size() != codebook.bank().size()) {
    throw UsageError("--vector has " + std::to_string(v.size()) +
                     " components, codebook has " +
                     std::to_string(codebook.bank().size()) + " filters");
  }
  const auto r = decode(v, codebook);
  if (c.format == "json") {
    out << io::decode_to_json(r);
  } else {
    out << io::format_number(r.angle.value());
    if (r.exact) {
      out << " exact";
    } else {
      out << " distance=" << io::format_number(r.distance);
    }
    out << " margin=" << io::format_number(r.margin) << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------------ search

struct SearchArgs {
  std::string mode;
  std::size_t n = 0;
  std::string filters;
  std::optional<int> photons;
  std::optional<double> grid_step;
  std::optional<std::size_t> size;
  std::optional<std::size_t> size_max;
  int n_max = 64;
  std::uint64_t cap = kDefaultCombinationCap;
};

void fill_claim(DesignReport& r) {
  if (const auto claim = table4_claim(r.n)) {
    r.paper_claim_filters = claim->filters;
    r.paper_claim_total_photons = claim->total_photons;
  }
}

void emit_reports(const std::vector<DesignReport>& rows, const Common& c,
                  std::ostream& out) {
  if (c.format == "json") {
    out << io::design_reports_to_json(rows);
  } else {
    io::write_design_reports_csv(out, rows);
  }
}

bool spacing_matches(const FilterBank& bank, double spacing) {
  if (bank.size() < 2) return false;
  std::vector<Angle> sorted(bank.begin(), bank.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (std::fabs(angular_distance(sorted[j - 1], sorted[j]) - spacing) > kAngleTolerance) {
      return false;
    }
  }
  return true;
}

int cmd_search(const SearchArgs& a, const Common& c, std::ostream& out,
               std::ostream& err) {
  const AngleSet set(a.n);
  const int m = set.exponent();
  const SearchGrid grid =
      a.grid_step ? SearchGrid::uniform(*a.grid_step) : SearchGrid::default_for(set);
  DesignReport r;
  r.n = a.n;
  r.m = m;
  fill_claim(r);
  const auto claim = table4_claim(a.n);
  int status = kExitOk;

  if (a.mode == "photons") {
    if (a.filters.empty()) throw UsageError("--mode photons needs --filters");
    const FilterBank bank = parse_bank(a.filters);
    const auto result = min_photons(set, bank, a.n_max);
    r.budget_cap = a.n_max;
    r.filters_found = bank;
    r.photons_per_filter = result.photons;
    if (result.photons) {
      r.total_photons = *result.photons * static_cast<int>(bank.size());
      r.unique = true;
      r.margin = margin(build_codebook(set, bank, PhotonBudget(*result.photons)));
      if (!result.predecessor_collisions.empty()) {
        const auto& col = result.predecessor_collisions.front();
        err << "N=" << *result.photons - 1 << " collides: "
            << io::format_number(col.first.value()) << " and "
            << io::format_number(col.second.value()) << '\n';
      }
    } else {
      err << "no uniquely decodable budget up to N=" << a.n_max << '\n';
      status = kExitDomain;
    }
    r.status = result.photons ? SearchStatus::kFound : SearchStatus::kNotFound;
    if (claim) {
      r.agrees_with_paper = static_cast<int>(bank.size()) == claim->filters &&
                            r.unique && r.total_photons == claim->total_photons;
    }
  } else if (a.mode == "filters") {
    const int budget = a.photons.value_or(m);
    const std::size_t size_max = a.size_max.value_or(static_cast<std::size_t>(m));
    if (size_max < 1) throw UsageError("--size-max must be >= 1");
    const auto result = min_filters(set, grid, PhotonBudget(budget), size_max, a.cap);
    r.budget_cap = budget;
    r.status = result.status;
    if (result.witness) {
      r.filters_found = result.witness;
      r.photons_per_filter = budget;
      r.total_photons = budget * static_cast<int>(result.witness->size());
      r.unique = true;
      r.margin = margin(build_codebook(set, *result.witness, PhotonBudget(budget)));
    }
    if (claim) {
      r.agrees_with_paper =
          r.filters_found && static_cast<int>(r.filters_found->size()) == claim->filters;
    }
    if (result.status == SearchStatus::kTruncated) {
      err << "search space truncated after " << result.evaluated << " combinations\n";
      status = kExitDomain;
    } else if (result.status == SearchStatus::kNotFound) {
      err << "no uniquely decodable bank up to " << size_max << " filters\n";
      status = kExitDomain;
    }
  } else if (a.mode == "bank") {
    const int budget = a.photons.value_or(m);
    const std::size_t size = a.size.value_or(static_cast<std::size_t>(m));
    const auto result = best_bank(set, grid, size, PhotonBudget(budget), a.cap);
    r.budget_cap = budget;
    r.status = result.status;
    r.filters_found = result.bank;
    r.photons_per_filter = budget;
    r.total_photons = budget * static_cast<int>(size);
    r.margin = result.margin;
    r.unique = result.margin > 0.0;
    if (const auto spacing = claimed_optimal_spacing(a.n); spacing && result.bank) {
      r.agrees_with_paper = spacing_matches(*result.bank, *spacing);
      err << "claimed optimal spacing " << io::format_number(*spacing)
          << (*r.agrees_with_paper ? " matches" : " does not match")
          << " the best bank\n";
    }
    if (result.status == SearchStatus::kTruncated) {
      err << "search space truncated after " << result.evaluated << " combinations\n";
      status = kExitDomain;
    }
  } else {
    throw UsageError("unknown --mode " + a.mode);
  }
  emit_reports({r}, c, out);
  return status;
}

// ------------------------------------------------------------------ table4

struct Table4Args {
  std::string n_values = "4,8,16,32";
  std::optional<double> grid_step;
  std::uint64_t cap = kDefaultCombinationCap;
};

int cmd_table4(const Table4Args& a, const Common& c, std::ostream& out,
               std::ostream& err) {
  std::vector<std::size_t> ns;
  for (double v : io::parse_number_list(a.n_values)) {
    if (v < 0 || v != std::floor(v)) throw UsageError("--n values must be integers");
    ns.push_back(static_cast<std::size_t>(v));
  }
  std::optional<SearchGrid> grid;
  if (a.grid_step) grid = SearchGrid::uniform(*a.grid_step);
  const auto rows = table4_report(ns, grid, a.cap);
  emit_reports(rows, c, out);
  const bool truncated = std::any_of(rows.begin(), rows.end(), [](const auto& r) {
    return r.status == SearchStatus::kTruncated;
  });
  if (truncated) {
    err << "search space truncated for at least one row\n";
    return kExitDomain;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::size_t n = 8;
  std::string filters = "0,22.5,45";
  int photons = 3;
  std::optional<int> pulse;
  std::size_t trials = 10000;
  double jitter = 0.0;
  double loss = 0.0;
  double siphon = 0.5;
  int link = 1;
  std::string detector = "intensity";
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  ProtocolConfig config =
      ProtocolConfig::standard(a.n, parse_bank(a.filters), PhotonBudget(a.photons));
  if (a.pulse) config.photons_per_pulse = *a.pulse;
  config.detector = a.detector == "counting" ? DetectorModel::kPhotonCounting
                                             : DetectorModel::kIntensity;
  const ChannelModel channel{a.jitter, a.loss};
  const EveModel eve{a.link, a.siphon};
  eve.validate();
  if (a.trials == 0) throw UsageError("--trials must be >= 1");

  const auto baseline = run_three_stage(config, channel, std::nullopt, a.trials, c.seed);
  const auto attack = run_three_stage(config, channel, eve, a.trials, c.seed);
  const auto stat = detection_stat(baseline, attack);
  if (c.format == "json") {
    out << io::simulation_to_json(baseline, attack, stat);
  } else {
    out << io::trial_report_header(config.bank.size()) << '\n'
        << io::trial_report_row("baseline", baseline) << '\n'
        << io::trial_report_row("attack", attack) << '\n'
        << '\n'
        << io::kDetectionHeader << '\n'
        << io::detection_row(stat) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polarization-state tomography for multi-stage quantum cryptography",
               "polartomo"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  app.add_option("--seed", common.seed, "seed for every stochastic step");
  app.add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", common.out_path, "write data output to PATH");

  CodebookArgs cb;
  auto* codebook = app.add_subcommand("codebook", "stored intensity vectors");
  codebook->add_option("--n", cb.n, "number of polarization angles")->required();
  codebook->add_option("--filters", cb.filters, "filter angles, e.g. 0,22.5,45")
      ->required();
  codebook->add_option("--photons", cb.photons, "photons per filter")->required();

  DecodeArgs dec;
  auto* decode_cmd = app.add_subcommand("decode", "decode an intensity vector");
  decode_cmd->add_option("--codebook", dec.codebook_path, "codebook JSON file")
      ->required();
  decode_cmd->add_option("--vector", dec.vector, "comma-separated counts")->required();

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "exhaustive design search");
  search->add_option("--mode", sa.mode)
      ->required()
      ->check(CLI::IsMember({"filters", "photons", "bank"}));
  search->add_option("--n", sa.n)->required();
  search->add_option("--filters", sa.filters, "bank for --mode photons");
  search->add_option("--photons", sa.photons, "per-filter budget (default m)");
  search->add_option("--grid-step", sa.grid_step, "candidate filter spacing");
  search->add_option("--size", sa.size, "bank size for --mode bank (default m)");
  search->add_option("--size-max", sa.size_max, "largest bank for --mode filters");
  search->add_option("--n-max", sa.n_max, "largest budget for --mode photons");
  search->add_option("--max-combinations", sa.cap, "combination cap");

  Table4Args t4;
  auto* table4 = app.add_subcommand("table4", "filter and photon requirements");
  table4->add_option("--n", t4.n_values, "comma-separated angle counts");
  table4->add_option("--grid-step", t4.grid_step, "candidate filter spacing");
  table4->add_option("--max-combinations", t4.cap, "combination cap");

  SimulateArgs sim;
  std::string unused_config;
  auto* simulate = app.add_subcommand("simulate", "three-stage protocol with Eve");
  simulate->add_option("--config", unused_config, "key=value scenario file");
  simulate->add_option("--n", sim.n);
  simulate->add_option("--filters", sim.filters);
  simulate->add_option("--photons", sim.photons, "receiver budget per filter");
  simulate->add_option("--pulse", sim.pulse, "photons per pulse (default photons x filters)");
  simulate->add_option("--trials", sim.trials, "bits per scenario");
  simulate->add_option("--jitter", sim.jitter, "per-photon jitter sigma, degrees");
  simulate->add_option("--loss", sim.loss, "per-photon loss probability per link");
  simulate->add_option("--siphon", sim.siphon, "fraction Eve siphons");
  simulate->add_option("--link", sim.link, "link Eve taps (1-3)");
  simulate->add_option("--detector", sim.detector)
      ->check(CLI::IsMember({"intensity", "counting"}));

  try {
    const auto args = expand_scenario(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ostringstream data;
  int status = kExitOk;
  try {
    if (codebook->parsed()) {
      status = cmd_codebook(cb, common, data, err);
    } else if (decode_cmd->parsed()) {
      status = cmd_decode(dec, common, data);
    } else if (search->parsed()) {
      status = cmd_search(sa, common, data, err);
    } else if (table4->parsed()) {
      status = cmd_table4(t4, common, data, err);
    } else if (simulate->parsed()) {
      status = cmd_simulate(sim, common, data);
    }
  } catch (const CodebookNotDecodable& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (common.out_path.empty()) {
    out << data.str();
  } else {
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << common.out_path << '\n';
      return kExitUsage;
    }
    file << data.str();
  }
  return status;
}

}  // namespace polartomo::cli
