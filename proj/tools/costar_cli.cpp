// Command-line front end: pattern detection, partition construction with
// fail-closed verification, template inspection, partition verification,
// the bipartite codec, and labelled class enumeration.

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "costar/chain.hpp"
#include "costar/codec.hpp"
#include "costar/graph6.hpp"
#include "costar/matching.hpp"
#include "costar/stars.hpp"
#include "costar/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;  // verification or class-membership failure
constexpr int exit_usage = 2;
constexpr int exit_size = 3;

std::string read_input(const std::string& path) {
  if (path.empty()) {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw costar::argument_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw costar::argument_error("cannot open output file: " + path);
  out << text;
}

bool looks_bipartite(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string word;
    if (ls >> word) return word == "bip";
  }
  return false;
}

nlohmann::json violation_json(const costar::class_violation& e) {
  nlohmann::json j{{"pattern", e.pattern}};
  if (!e.witness.empty()) {
    j["witness"] = e.witness;
  } else {
    j["witness_a"] = e.witness_a;
    j["witness_b"] = e.witness_b;
  }
  return j;
}

std::vector<int> parse_params(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    int value = 0;
    try {
      value = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw costar::argument_error("bad --params entry: " + item);
    }
    while (pos < item.size() &&
           std::isspace(static_cast<unsigned char>(item[pos])))
      ++pos;
    if (pos != item.size())
      throw costar::argument_error("bad --params entry: " + item);
    out.push_back(value);
  }
  return out;
}

costar::StarParams star_params_from(const std::vector<int>& v) {
  if (v.size() == 2) return costar::StarParams(v[0], v[0], v[0], v[0], v[1]);
  if (v.size() == 5) return costar::StarParams(v[0], v[1], v[2], v[3], v[4]);
  throw costar::argument_error(
      "star modes expect --params n,k or n_up,n_lambda,m_up,m_lambda,k");
}

/// Splits a comma-separated pattern list, respecting parentheses:
/// "G1(2,1),G2(2,1)" has commas both inside and between names.
std::vector<costar::PatternSpec> parse_spec_list(const std::string& text) {
  std::vector<costar::PatternSpec> specs;
  std::string cur;
  int depth = 0;
  auto flush = [&] {
    std::size_t a = cur.find_first_not_of(" \t");
    if (a == std::string::npos) {
      cur.clear();
      return;
    }
    std::size_t b = cur.find_last_not_of(" \t");
    specs.push_back(costar::parse_pattern(cur.substr(a, b - a + 1)));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      flush();
      continue;
    }
    cur.push_back(ch);
  }
  flush();
  if (specs.empty())
    throw costar::argument_error("--free lists no patterns");
  return specs;
}

struct CommonOpts {
  std::string in;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& io) {
  cmd->add_option("--in", io.in, "input file (default: stdin)");
  cmd->add_option("--out", io.out, "output file (default: stdout)");
}

int run_detect(const CommonOpts& io, const std::string& pattern) {
  const costar::PatternSpec spec = costar::parse_pattern(pattern);
  const std::string text = read_input(io.in);
  nlohmann::json j;
  bool found = false;
  if (looks_bipartite(text)) {
    const costar::BipartiteGraph b = costar::parse_bipartite(text);
    if (auto w = costar::find_induced_bipartite(b, spec)) {
      found = true;
      j = {{"pattern", costar::format_pattern(spec)},
           {"witness_a", w->a},
           {"witness_b", w->b}};
    }
  } else {
    const costar::Graph g = costar::parse_graph6(text);
    if (auto w = costar::find_induced(g, spec)) {
      found = true;
      j = {{"pattern", costar::format_pattern(spec)}, {"witness", *w}};
    }
  }
  write_output(io.out, found ? j.dump(2) + "\n" : "free\n");
  return exit_ok;
}

int run_partition(const CommonOpts& io, const std::string& mode,
                  const std::string& params, bool greedy) {
  const std::vector<int> v = parse_params(params);
  const std::string text = read_input(io.in);
  costar::LabelledPartition part;
  costar::VerifyReport report;
  if (mode == "bip-matching") {
    if (v.size() != 2)
      throw costar::argument_error("bip-matching expects --params n,m");
    const costar::BipartiteGraph b = costar::parse_bipartite(text);
    part = costar::bipartite_matching_partition(b, v[0], v[1]);
    report = costar::verify_partition(b, part, 1);
  } else if (mode == "matching") {
    if (v.size() != 1)
      throw costar::argument_error("matching expects --params n");
    const costar::Graph g = costar::parse_graph6(text);
    part = costar::matching_partition(g, v[0]);
    report = costar::verify_partition(g, part, 1);
  } else if (mode == "bip-stars") {
    const costar::StarParams sp = star_params_from(v);
    const costar::BipartiteGraph b = costar::parse_bipartite(text);
    part = costar::bipartite_star_partition(b, sp, greedy);
    report = costar::verify_partition(b, part, sp.k);
  } else if (mode == "main") {
    if (v.size() != 3)
      throw costar::argument_error("main expects --params n,k,l");
    const costar::Graph g = costar::parse_graph6(text);
    part = costar::main_partition(g, v[0], v[1], v[2], greedy);
    report = costar::verify_partition(g, part, v[1]);
  } else {
    throw costar::argument_error("unknown partition mode: " + mode);
  }
  if (!report.verdict) {
    // fail closed: never emit a partition the verifier rejected
    std::cerr << nlohmann::json(report).dump(2) << '\n';
    return exit_failure;
  }
  write_output(io.out, nlohmann::json(part).dump(2) + "\n");
  return exit_ok;
}

int run_template(const CommonOpts& io, const std::string& kind,
                 const std::string& params, bool greedy) {
  const std::string text = read_input(io.in);
  const costar::BipartiteGraph b = costar::parse_bipartite(text);
  nlohmann::json j;
  if (kind == "chain") {
    costar::ChainTemplate t;
    if (params.empty()) {
      t = costar::build_chain_template(b);
      j["params"] = nlohmann::json::object();
    } else {
      const std::vector<int> v = parse_params(params);
      if (v.size() != 2)
        throw costar::argument_error("chain templates expect --params n,m");
      t = costar::refine_to_nm_template(b, v[0], v[1]);
      j["params"] = {{"n", v[0]}, {"m", v[1]}};
    }
    j["bags_a"] = t.bags_a;
    j["bags_b"] = t.bags_b;
    j["q"] = t.q;
  } else if (kind == "d") {
    const costar::StarParams sp =
        star_params_from(parse_params(params));
    costar::DTemplate t = costar::d_template_procedure(b, sp, greedy);
    t = costar::refine_consecutive(b, t, greedy);
    j["params"] = {{"n_up", sp.n_up},     {"n_lambda", sp.n_lambda},
                   {"m_up", sp.m_up},     {"m_lambda", sp.m_lambda},
                   {"k", sp.k},           {"r", sp.r}};
    j["bags_a"] = t.bags_a;
    j["bags_b"] = t.bags_b;
    j["q"] = t.q;
    j["d"] = t.d;
    j["I"] = t.start_indices();
    j["marked_a"] = t.marked_a;
    j["marked_b"] = t.marked_b;
  } else {
    throw costar::argument_error("unknown template kind: " + kind);
  }
  write_output(io.out, j.dump(2) + "\n");
  return exit_ok;
}

int run_verify(const CommonOpts& io, int k, const std::string& partition_path) {
  const std::string ptext = read_input(partition_path);
  costar::LabelledPartition part;
  try {
    costar::from_json(nlohmann::json::parse(ptext), part);
  } catch (const nlohmann::json::exception& e) {
    throw costar::parse_error(std::string("bad partition JSON: ") + e.what(), 0);
  }
  const std::string text = read_input(io.in);
  costar::VerifyReport report;
  if (looks_bipartite(text)) {
    report = costar::verify_partition(costar::parse_bipartite(text), part, k);
  } else {
    report = costar::verify_partition(costar::parse_graph6(text), part, k);
  }
  write_output(io.out, nlohmann::json(report).dump(2) + "\n");
  return report.verdict ? exit_ok : exit_failure;
}

int run_encode(const CommonOpts& io, int s) {
  const costar::BipartiteGraph b = costar::parse_bipartite(read_input(io.in));
  std::vector<std::string> findings;
  const costar::Code c = costar::encode(b, s, &findings);
  for (const std::string& f : findings) std::cerr << "finding: " << f << '\n';
  write_output(io.out, costar::serialize_code(c));
  return exit_ok;
}

int run_decode(const CommonOpts& io, int s, bool have_s) {
  const costar::Code c = costar::parse_code(read_input(io.in));
  if (have_s && c.s != s)
    throw costar::argument_error("--s does not match the code header");
  write_output(io.out, costar::to_bipartite_text(costar::decode(c)));
  return exit_ok;
}

int run_enumerate(const CommonOpts& io, const std::string& free_list, int n,
                  int jobs, int cap) {
  const std::vector<costar::PatternSpec> specs = parse_spec_list(free_list);
  if (n < 1) throw costar::argument_error("--n must be positive");
  if (jobs < 1) throw costar::argument_error("--jobs must be positive");
  if (n > cap)
    throw costar::size_error("enumerate: n exceeds the cap (see --cap)");
  std::ostringstream csv;
  csv << "n,count\n";
  for (int size = 1; size <= n; ++size) {
    const std::uint64_t total = 1ull << (size * (size - 1) / 2);
    std::uint64_t count = 0;
    if (jobs == 1 || total < 1024) {
      count = costar::detail::count_labelled_range(specs, size, 0, total);
    } else {
      // contiguous ranges; each worker's count is independent of the
      // schedule, so the sum is deterministic
      std::vector<std::uint64_t> partial(jobs, 0);
      std::vector<std::thread> workers;
      for (int w = 0; w < jobs; ++w) {
        const std::uint64_t lo = total / jobs * w;
        const std::uint64_t hi =
            w + 1 == jobs ? total : total / jobs * (w + 1);
        workers.emplace_back([&, w, lo, hi] {
          partial[w] = costar::detail::count_labelled_range(specs, size, lo, hi);
        });
      }
      for (std::thread& t : workers) t.join();
      for (std::uint64_t p : partial) count += p;
    }
    csv << size << ',' << count << '\n';
  }
  write_output(io.out, csv.str());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Hereditary graph class toolkit: forbidden-pattern detection, "
      "partitions with verified pairwise guarantees, chain and d-templates, "
      "a succinct codec, and labelled enumeration"};
  app.require_subcommand(1);
  int seed = 0;
  app.add_option("--seed", seed,
                 "reserved for random instance generation (unused)");

  CommonOpts detect_io, part_io, tmpl_io, verify_io, enc_io, dec_io, enum_io;
  std::string pattern, mode, params, tmpl_kind, tmpl_params, partition_path;
  std::string free_list;
  bool greedy = false;
  int k = 1, s = 1, n = 1, jobs = 1, cap = 7;

  CLI::App* detect = app.add_subcommand(
      "detect", "search a graph for one forbidden pattern");
  detect->add_option("--pattern", pattern, "pattern name, e.g. \"2K2\"")
      ->required();
  add_common(detect, detect_io);

  CLI::App* partition = app.add_subcommand(
      "partition", "partition a graph and verify the result");
  partition
      ->add_option("--mode", mode,
                   "bip-matching | matching | bip-stars | main")
      ->required();
  partition
      ->add_option("--params", params,
                   "bip-matching: n,m; matching: n; bip-stars: n,k or "
                   "n_up,n_lambda,m_up,m_lambda,k; main: n,k,l")
      ->required();
  partition->add_flag("--greedy", greedy,
                      "greedy covering subsets instead of exhaustive ones");
  add_common(partition, part_io);

  CLI::App* tmpl = app.add_subcommand(
      "template", "build a chain or d-template for a bipartite graph");
  tmpl->add_option("--kind", tmpl_kind, "chain | d")->required();
  tmpl->add_option("--params", tmpl_params,
                   "chain: n,m (optional); d: n,k or "
                   "n_up,n_lambda,m_up,m_lambda,k");
  tmpl->add_flag("--greedy", greedy,
                 "greedy covering subsets instead of exhaustive ones");
  add_common(tmpl, tmpl_io);

  CLI::App* verify = app.add_subcommand(
      "verify", "verify a partition against its guarantees");
  verify->add_option("--k", k, "star size parameter of the class")->required();
  verify->add_option("--partition", partition_path, "partition JSON file")
      ->required();
  add_common(verify, verify_io);

  CLI::App* encode = app.add_subcommand(
      "encode", "encode a bipartite graph as a difference sequence");
  encode->add_option("--s", s, "star size the host must be free of")
      ->required();
  add_common(encode, enc_io);

  CLI::App* decode = app.add_subcommand(
      "decode", "rebuild a bipartite graph from a difference sequence");
  CLI::Option* dec_s = decode->add_option("--s", s, "expected star size");
  add_common(decode, dec_io);

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "count labelled class members for each size up to n");
  enumerate->add_option("--free", free_list, "comma-separated pattern list")
      ->required();
  enumerate->add_option("--n", n, "largest vertex count")->required();
  enumerate->add_option("--jobs", jobs, "worker threads");
  enumerate->add_option("--cap", cap, "enumeration size cap (default 7)");
  add_common(enumerate, enum_io);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (detect->parsed()) return run_detect(detect_io, pattern);
    if (partition->parsed()) return run_partition(part_io, mode, params, greedy);
    if (tmpl->parsed()) return run_template(tmpl_io, tmpl_kind, tmpl_params, greedy);
    if (verify->parsed()) return run_verify(verify_io, k, partition_path);
    if (encode->parsed()) return run_encode(enc_io, s);
    if (decode->parsed()) return run_decode(dec_io, s, dec_s->count() > 0);
    if (enumerate->parsed())
      return run_enumerate(enum_io, free_list, n, jobs, cap);
  } catch (const costar::class_violation& e) {
    std::cerr << violation_json(e).dump(2) << '\n';
    return exit_failure;
  } catch (const costar::size_error& e) {
    std::cerr << e.what() << '\n';
    return exit_size;
  } catch (const costar::parse_error& e) {
    std::cerr << e.what() << '\n';
    return exit_usage;
  } catch (const costar::argument_error& e) {
    std::cerr << e.what() << '\n';
    return exit_usage;
  } catch (const costar::contract_error& e) {
    std::cerr << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}
