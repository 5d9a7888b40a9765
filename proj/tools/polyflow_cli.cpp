// SPDX-License-Identifier: Apache-2.0
// Command-line front end over the C API.
#include "polyflow/polyflow.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

bool g_json = false;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Failure {
  pf_status status;
  std::string message;
};

const char* status_name(pf_status s) {
  switch (s) {
    case PF_OK: return "ok";
    case PF_ERR_PARSE: return "parse";
    case PF_ERR_DOMAIN: return "domain";
    case PF_ERR_ARGUMENT: return "argument";
    case PF_ERR_HYPOTHESIS: return "hypothesis";
    case PF_ERR_LIMIT: return "limit";
    case PF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int report(const std::string& message, int exit_code, const char* kind) {
  if (g_json) {
    nlohmann::ordered_json j{{"schema", 1}, {"kind", "error"}, {"status", kind}, {"message", message}};
    std::vector<std::string> lines;
    std::istringstream in(message);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    j["diagnostics"] = lines;
    std::cerr << j.dump(2) << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
  return exit_code;
}

void check(pf_status s) {
  if (s != PF_OK) throw Failure{s, pf_last_error()};
}

struct Str {
  char* p = nullptr;
  ~Str() { pf_string_free(p); }
  std::string get() const { return p ? p : ""; }
};

struct SurfaceHandle {
  pf_surface* p = nullptr;
  ~SurfaceHandle() { pf_surface_free(p); }
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void load(SurfaceHandle& h, const std::string& path) {
  std::string text = read_input(path);
  check(pf_surface_parse(text.data(), text.size(), &h.p));
}

std::vector<std::string> split(const std::string& s, std::size_t parts, const char* what) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  if (out.size() != parts) throw UsageError(std::string(what) + " needs " + std::to_string(parts) + " comma-separated fields");
  return out;
}

std::size_t to_edge(const std::string& s) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used == s.size() && v >= 1) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw UsageError("bad edge number '" + s + "'");
}

void emit(const std::string& s) { std::cout << s << std::flush; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Straight-line flow on translation surfaces glued from rectangles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pf_version());

  std::string net, slope, start, interval, horizons, targets, preset = "golden", tower, cert;
  long crossings = -1, nmax = 1000, max_events = 20000000;
  std::string max_time;
  bool reverse = false, certificate = false;
  std::size_t edge = 1;
  int exit_code = 0;

  auto json_flag = [](CLI::App* sub) { sub->add_flag("--json", g_json, "Machine-readable output and errors"); };

  auto* validate = app.add_subcommand("validate", "Validate a net file ('-' reads standard input)");
  validate->add_option("net", net, "Net file")->required();
  json_flag(validate);

  auto* tr = app.add_subcommand("trace", "Crossings of vertical edges as CSV");
  tr->add_option("net", net)->required();
  tr->add_option("--slope", slope, "Slope name or expression")->required();
  tr->add_option("--start", start, "edge,y")->required();
  tr->add_option("--crossings", crossings, "Number of crossings");
  tr->add_option("--time", max_time, "Arc-length horizon (rational)");
  tr->add_flag("--reverse", reverse, "Trace backwards");
  json_flag(tr);

  auto* vis = app.add_subcommand("visit", "Visiting time of an interval: oracle and cascade");
  vis->add_option("net", net)->required();
  vis->add_option("--slope", slope)->required();
  vis->add_option("--interval", interval, "edge,lo,hi")->required();
  vis->add_flag("--certificate", certificate, "Print the cascade certificate JSON only");
  json_flag(vis);

  auto* rep = app.add_subcommand("replay", "Re-execute a certificate");
  rep->add_option("net", net)->required();
  rep->add_option("certificate", cert, "Certificate JSON")->required();
  json_flag(rep);

  auto* gaps = app.add_subcommand("gaps", "Gap profile CSV on one edge");
  gaps->add_option("net", net)->required();
  gaps->add_option("--slope", slope)->required();
  gaps->add_option("--edge", edge, "Edge measured")->required();
  gaps->add_option("--horizons", horizons, "T1,T2,... ascending");
  gaps->add_option("--targets", targets, "n1,n2,...: least horizons with gap <= 1/n instead");
  gaps->add_option("--start", start, "edge,y centre of the segment (default: middle of the measured edge)");
  gaps->add_option("--max-events", max_events, "Crossing cap for --targets");
  json_flag(gaps);

  auto* fit = app.add_subcommand("fit", "Superdensity / polynomial fit of a profile or passage CSV");
  fit->add_option("csv", net, "CSV file ('-' reads standard input)")->required();
  fit->add_option("--targets", targets, "n1,n2,...");
  fit->add_option("--tower", tower, "Tower for exact gap comparison, e.g. 'r^2=2'");
  json_flag(fit);

  auto* dio = app.add_subcommand("diophantine", "Badly approximable and linear form tables");
  dio->add_option("--preset", preset, "golden, sqrt2m1 or octagon");
  dio->add_option("--nmax", nmax, "Range of n (octagon: max |ni|)");
  json_flag(dio);

  auto* oct = app.add_subcommand("octagon", "Print the octagon net");
  json_flag(oct);

  auto* unf = app.add_subcommand("unfold", "Four-copy unfolding of a table net");
  unf->add_option("net", net)->required();
  json_flag(unf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) {
      std::string text = read_input(net);
      Str out;
      int valid = 0;
      check(pf_validate(text.data(), text.size(), g_json, &out.p, &valid));
      emit(out.get());
      exit_code = valid ? 0 : 1;
    } else if (tr->parsed()) {
      SurfaceHandle h;
      load(h, net);
      auto f = split(start, 2, "--start");
      if (crossings < 0 && max_time.empty()) throw UsageError("trace needs --crossings or --time");
      Str out;
      check(pf_trace_csv(h.p, slope.c_str(), to_edge(f[0]), f[1].c_str(), crossings,
                         max_time.empty() ? nullptr : max_time.c_str(), reverse, &out.p));
      emit(out.get());
    } else if (vis->parsed()) {
      SurfaceHandle h;
      load(h, net);
      auto f = split(interval, 3, "--interval");
      Str out;
      if (certificate) {
        check(pf_certificate_json(h.p, slope.c_str(), to_edge(f[0]), f[1].c_str(), f[2].c_str(), &out.p));
        emit(out.get());
      } else {
        check(pf_visit_json(h.p, slope.c_str(), to_edge(f[0]), f[1].c_str(), f[2].c_str(), &out.p));
        if (g_json) {
          emit(out.get());
        } else {
          auto j = nlohmann::json::parse(out.get());
          std::cout << "oracle t* = " << j["oracle"]["t"].get<std::string>() << " ~ "
                    << j["oracle"]["t_decimal"].get<double>() << "\n";
          std::cout << "cascade t* = " << j["cascade"]["t"].get<std::string>() << " ~ "
                    << j["cascade"]["t_decimal"].get<double>() << " (" << j["cascade"]["reason"].get<std::string>()
                    << ", " << j["cascade"]["total_shifts"].get<long>() << " shifts)\n";
          std::cout << "replay " << (j["cascade"]["replay_ok"].get<bool>() ? "ok" : "MISMATCH") << "\n";
          std::cout << "bound " << j["bound"]["text"].get<std::string>() << ": "
                    << (j["bound"]["holds"].get<bool>() ? "holds" : "FAILS") << "\n";
          std::cout << "endpoint separation " << (j["endpoint"]["ok"].get<bool>() ? "ok" : "FAILS") << "\n";
          bool ok = j["cascade"]["replay_ok"].get<bool>() && j["bound"]["holds"].get<bool>() &&
                    j["endpoint"]["ok"].get<bool>();
          exit_code = ok ? 0 : 1;
        }
      }
    } else if (rep->parsed()) {
      SurfaceHandle h;
      load(h, net);
      std::string c = read_input(cert);
      Str out;
      check(pf_replay(h.p, c.c_str(), &out.p));
      if (g_json)
        emit(nlohmann::ordered_json{{"schema", 1}, {"kind", "replay"}, {"tau_star", out.get()}}.dump(2) + "\n");
      else
        std::cout << "replay ok, tau* = " << out.get() << "\n";
    } else if (gaps->parsed()) {
      SurfaceHandle h;
      load(h, net);
      std::size_t se = edge;
      std::string sy;
      if (!start.empty()) {
        auto f = split(start, 2, "--start");
        se = to_edge(f[0]);
        sy = f[1];
      }
      if (horizons.empty() == targets.empty()) throw UsageError("gaps needs exactly one of --horizons and --targets");
      Str out;
      if (!horizons.empty())
        check(pf_gaps_csv(h.p, slope.c_str(), edge, se, sy.empty() ? nullptr : sy.c_str(), horizons.c_str(), &out.p));
      else
        check(pf_passage_csv(h.p, slope.c_str(), edge, se, sy.empty() ? nullptr : sy.c_str(), targets.c_str(),
                             max_events, &out.p));
      emit(out.get());
    } else if (fit->parsed()) {
      std::string text = read_input(net);
      Str out;
      check(pf_fit(text.data(), text.size(), targets.empty() ? nullptr : targets.c_str(),
                   tower.empty() ? nullptr : tower.c_str(), g_json, &out.p));
      emit(out.get());
    } else if (dio->parsed()) {
      Str out;
      int passed = 0;
      check(pf_diophantine(preset.c_str(), nmax, g_json, &out.p, &passed));
      emit(out.get());
      exit_code = passed ? 0 : 1;
    } else if (oct->parsed()) {
      SurfaceHandle h;
      check(pf_surface_octagon(&h.p));
      Str out;
      check(pf_surface_serialize(h.p, 1, &out.p));
      emit(out.get());
    } else if (unf->parsed()) {
      std::string text = read_input(net);
      Str out;
      check(pf_unfold(text.data(), text.size(), &out.p));
      emit(out.get());
    }
  } catch (const UsageError& e) {
    return report(e.what(), 2, "usage");
  } catch (const Failure& f) {
    return report(f.message, f.status == PF_ERR_ARGUMENT ? 2 : 1, status_name(f.status));
  } catch (const std::exception& e) {
    return report(e.what(), 1, "internal");
  }
  return exit_code;
}
