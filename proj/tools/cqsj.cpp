#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqsj/database.hpp"
#include "cqsj/engines/bench.hpp"
#include "cqsj/engines/oracle.hpp"
#include "cqsj/engines/select.hpp"
#include "cqsj/error.hpp"
#include "cqsj/query.hpp"
#include "cqsj/reductions/encoding.hpp"
#include "cqsj/reductions/gadgets.hpp"
#include "cqsj/reductions/graph.hpp"
#include "cqsj/structure/classify.hpp"

namespace {

using namespace cqsj;

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kInapplicable = 3 };

struct RunConfig {
  std::string query_path, db_path, out_path, input_path;
  std::string engine = "auto";
  bool dedup = true;
  std::optional<std::size_t> limit;
  std::uint64_t seed = 1;
  std::vector<std::size_t> sizes{1000, 2000, 4000, 8000};
  std::string gen = "random";
  std::string kind;
  bool json = false;
  bool stats = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << text;
}

Query load_query(const RunConfig& cfg) {
  if (cfg.query_path.empty()) throw SchemaError("--query is required");
  return parse_query(read_file(cfg.query_path));
}

Database load_db(const RunConfig& cfg) {
  if (cfg.db_path.empty()) throw SchemaError("--db is required");
  return parse_database(read_file(cfg.db_path));
}

engines::EngineOptions engine_options(const RunConfig& cfg) {
  engines::EngineOptions opt;
  opt.dedup = cfg.dedup;
  return opt;
}

int cmd_classify(const RunConfig& cfg) {
  const auto report = structure::classify(load_query(cfg));
  write_output(cfg.out_path, cfg.json ? report.to_json().dump(2) + "\n" : report.to_text());
  return kOk;
}

int cmd_enumerate(const RunConfig& cfg) {
  const Query q = load_query(cfg);
  const Database db = load_db(cfg);
  const auto start = std::chrono::steady_clock::now();
  auto ticks = engines::make_ticks();
  auto run = engines::make_engine(cfg.engine, q, db, ticks, engine_options(cfg));
  if (!run.warning.empty()) std::cerr << "warning: " << run.warning << "\n";
  const std::uint64_t pre = ticks->count;
  std::uint64_t last = pre, max_gap = 0, count = 0;
  std::ostringstream out;
  while (!cfg.limit || count < *cfg.limit) {
    auto a = run.cursor->next();
    if (a) ticks->tick();
    max_gap = std::max(max_gap, ticks->count - last);
    last = ticks->count;
    if (!a) break;
    ++count;
    out << serialize_answer(to_values(db, *a)) << "\n";
  }
  write_output(cfg.out_path, out.str());
  if (cfg.stats) {
    engines::DelayStats s;
    s.preprocessing_ticks = pre;
    s.max_gap = max_gap;
    s.answers = count;
    s.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    auto j = s.to_json();
    j["engine"] = run.engine;
    std::cerr << j.dump() << "\n";
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const Query q = load_query(cfg);
  const Database db = load_db(cfg);
  auto run = engines::make_engine(cfg.engine, q, db, engines::make_ticks(), engine_options(cfg));
  auto answers = engines::drain(*run.cursor);
  // Harness self-test: drop one answer so the comparison must fail.
  if (std::getenv("CQSJ_CORRUPT_ENGINE") && !answers.empty()) answers.pop_back();
  std::vector<AnswerTuple> got;
  for (const auto& a : answers) got.push_back(to_values(db, a));
  const std::set<AnswerTuple> got_set(got.begin(), got.end());
  const auto truth = engines::oracle_enumerate(q, db);
  std::vector<std::string> diff;
  for (const auto& a : truth)
    if (!got_set.count(a)) diff.push_back("- " + serialize_answer(a));
  for (const auto& a : got_set)
    if (!truth.count(a)) diff.push_back("+ " + serialize_answer(a));
  const std::size_t duplicates = got.size() - got_set.size();
  if (duplicates) diff.push_back("duplicates: " + std::to_string(duplicates));
  if (cfg.json) {
    nlohmann::json j{{"engine", run.engine}, {"pass", diff.empty()}, {"answers", got_set.size()},
                     {"oracle_answers", truth.size()}, {"diff", diff}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (diff.empty() ? "PASS" : "FAIL") << " engine=" << run.engine << " answers=" << got_set.size()
              << " oracle=" << truth.size() << "\n";
    for (const auto& d : diff) std::cout << d << "\n";
  }
  return diff.empty() ? kOk : kVerifyFailed;
}

int cmd_bench(const RunConfig& cfg) {
  const Query q = load_query(cfg);
  const auto rows = engines::bench_delay(q, cfg.engine, cfg.sizes, cfg.gen, cfg.seed, engine_options(cfg));
  const std::string cls = engines::delay_class(rows);
  if (cfg.json) {
    nlohmann::json j{{"engine", cfg.engine}, {"generator", cfg.gen}, {"seed", cfg.seed}, {"class", cls}};
    for (const auto& r : rows) j["rows"].push_back(r.to_json());
    write_output(cfg.out_path, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream out;
  out << "size\tfacts\tpreprocessing\tmax_gap\tanswers\twall_ms\n";
  for (const auto& r : rows)
    out << r.requested << "\t" << r.facts << "\t" << r.stats.preprocessing_ticks << "\t" << r.stats.max_gap << "\t"
        << r.stats.answers << "\t" << r.stats.wall_ms << "\n";
  out << "class: " << cls << "\n";
  write_output(cfg.out_path, out.str());
  return kOk;
}

// Relation names of a facts file in order of first appearance.
std::vector<std::string> symbols_in_order(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  static const std::regex name(R"(([A-Za-z_][A-Za-z0-9_]*)\s*\()");
  while (std::getline(in, line)) {
    if (auto c = line.find('%'); c != std::string::npos) line.erase(c);
    for (std::sregex_iterator it(line.begin(), line.end(), name), end; it != end; ++it) {
      const std::string s = (*it)[1];
      if (s == "pair") continue;
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

Database encoding_trick_cli(const RunConfig& cfg) {
  const Query q = load_query(cfg);
  const std::string text = read_file(cfg.input_path);
  Database d_prime = parse_database(text);
  auto relabeled = reductions::relabel_self_join_free(q);
  std::set<std::string> known;
  for (const auto& o : relabeled.occurrences) known.insert(o.symbol);
  bool direct = true;
  for (const auto& [name, _] : d_prime.relations()) direct = direct && known.count(name);
  if (!direct) {
    // Otherwise the i-th symbol to appear names the i-th atom.
    const auto order = symbols_in_order(text);
    if (order.size() != relabeled.occurrences.size())
      throw SchemaError("input uses " + std::to_string(order.size()) + " symbols, query has " +
                        std::to_string(relabeled.occurrences.size()) + " atoms");
    for (std::size_t i = 0; i < order.size(); ++i) relabeled.occurrences[i].symbol = order[i];
  }
  return reductions::encoding_trick(q, relabeled.occurrences, d_prime);
}

int cmd_gadget(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw SchemaError("--input is required");
  Database db;
  if (cfg.kind == "encoding-trick") {
    db = encoding_trick_cli(cfg);
  } else {
    const auto& g = reductions::gadget(cfg.kind);
    db = g.build(reductions::parse_graph(read_file(cfg.input_path)));
  }
  write_output(cfg.out_path, serialize_database(db));
  (cfg.out_path.empty() ? std::cerr : std::cout) << db.size() << " facts\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Conjunctive queries with self-joins: classification, enumeration, reductions"};
  app.require_subcommand(1);

  auto add_query = [&](CLI::App* sub) { sub->add_option("--query", cfg.query_path, "query file")->required(); };
  auto add_engine = [&](CLI::App* sub) {
    sub->add_option("--engine", cfg.engine, "auto | oracle | acyclic | untangle | mirror | bespoke:<id>");
    sub->add_flag("--dedup,!--no-dedup", cfg.dedup, "remove duplicates of bespoke streams (default on)");
  };

  auto* classify = app.add_subcommand("classify", "print the structural report and verdicts");
  add_query(classify);
  classify->add_flag("--json", cfg.json, "JSON output");
  classify->add_option("--out", cfg.out_path, "output file");

  auto* enumerate = app.add_subcommand("enumerate", "stream the answers of a query");
  add_query(enumerate);
  enumerate->add_option("--db", cfg.db_path, "facts file")->required();
  add_engine(enumerate);
  enumerate->add_option("--limit", cfg.limit, "stop after this many answers");
  enumerate->add_flag("--stats", cfg.stats, "print delay statistics (JSON, stderr)");
  enumerate->add_option("--out", cfg.out_path, "output file");

  auto* verify = app.add_subcommand("verify", "compare an engine with the oracle");
  add_query(verify);
  verify->add_option("--db", cfg.db_path, "facts file")->required();
  add_engine(verify);
  verify->add_flag("--json", cfg.json, "JSON output");

  auto* bench = app.add_subcommand("bench-delay", "measure delay over generated databases");
  add_query(bench);
  add_engine(bench);
  bench->add_option("--sizes", cfg.sizes, "database sizes in facts")->delimiter(',');
  bench->add_option("--gen", cfg.gen, "generator: random | copies | noisy | dense");
  bench->add_option("--seed", cfg.seed, "random seed");
  bench->add_flag("--json", cfg.json, "JSON output");
  bench->add_option("--out", cfg.out_path, "output file");

  auto* gadget = app.add_subcommand("gadget", "build a reduction database");
  gadget->add_option("kind", cfg.kind, "encoding-trick | triangle-untangle2 | triangle-mirrorfig1 | "
                                       "triangle-spike-q1 | utd-spike-q4")
      ->required()
      ->check(CLI::IsMember({"encoding-trick", "triangle-untangle2", "triangle-mirrorfig1", "triangle-spike-q1",
                             "utd-spike-q4"}));
  gadget->add_option("--input", cfg.input_path, "graph file, or colored facts for encoding-trick")->required();
  gadget->add_option("--query", cfg.query_path, "query (encoding-trick only)");
  gadget->add_option("--out", cfg.out_path, "output facts file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*classify) return cmd_classify(cfg);
    if (*enumerate) return cmd_enumerate(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*bench) return cmd_bench(cfg);
    if (*gadget) return cmd_gadget(cfg);
  } catch (const InapplicableEngine& e) {
    std::cerr << "inapplicable engine: " << e.what() << "\n";
    return kInapplicable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
