// gestgait: replay, classify, evaluate and serve from the command line.

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gestgait/config.hpp"
#include "gestgait/engine.hpp"
#include "gestgait/measure.hpp"
#include "gestgait/metrics.hpp"
#include "gestgait/rules.hpp"
#include "gestgait/server.hpp"
#include "gestgait/trace.hpp"

namespace {

using namespace gestgait;

Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::optional<std::string> opt(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

std::string default_events_path(const std::string& trace_path) {
  const std::string suffix = ".trace.jsonl";
  if (trace_path.size() > suffix.size() &&
      trace_path.compare(trace_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return trace_path.substr(0, trace_path.size() - suffix.size()) + ".events.jsonl";
  }
  return trace_path + ".events.jsonl";
}

int cmd_replay(const std::string& trace_path, const std::string& out_path,
               const std::string& config_path) {
  const EngineConfig cfg = load_config_or_default(opt(config_path));
  const Trace trace = read_trace_file(trace_path);
  for (const std::string& w : trace.warnings) std::cerr << "warning: " << w << '\n';
  const std::string out = out_path.empty() ? default_events_path(trace_path) : out_path;
  std::ofstream events(out, std::ios::binary);
  if (!events) {
    std::cerr << "cannot write " << out << '\n';
    return 1;
  }
  const ReplaySummary s = replay(trace, cfg, events);
  std::cout << "frames " << s.frames << ", commands " << s.commands << " (" << s.accepted
            << " accepted), errors " << s.errors << ", final state "
            << to_string(s.final_fsm.state) << '\n'
            << "events written to " << out << '\n';
  return 0;
}

int cmd_classify(const std::string& trace_path, const std::string& config_path,
                 const std::string& kernel, bool explain) {
  const EngineConfig cfg = load_config_or_default(opt(config_path));
  if (kernel == "scalar") {
    set_kernel_override(KernelKind::Scalar);
  } else if (kernel == "avx2") {
    if (!kernel_available(KernelKind::Avx2)) {
      std::cerr << "avx2 kernel not available on this CPU\n";
      return 1;
    }
    set_kernel_override(KernelKind::Avx2);
  }
  const Trace trace = read_trace_file(trace_path);
  for (const std::string& w : trace.warnings) std::cerr << "warning: " << w << '\n';

  std::vector<HandFrame> frames;
  frames.reserve(trace.frames.size());
  std::size_t malformed = 0;
  for (const TraceFrame& f : trace.frames) {
    try {
      frames.push_back(to_hand_frame(f, trace.header, cfg.augment));
    } catch (const std::invalid_argument& e) {
      std::cerr << "t_ms " << f.t_ms << ": " << e.what() << '\n';
      ++malformed;
    }
  }
  const RuleTable& rules = RuleTable::standard();
  const std::vector<GestureLabel> labels = rules.classify_batch(frames);
  std::map<std::string, std::size_t> histogram;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::cout << frames[i].timestamp_ms << ' ' << to_string(labels[i]) << '\n';
    if (explain) std::cout << rules.explain(frames[i]).to_text();
    ++histogram[std::string(to_string(labels[i]))];
  }
  std::cerr << "kernel " << to_string(active_kernel()) << ", " << frames.size() << " frames";
  if (malformed) std::cerr << ", " << malformed << " malformed";
  std::cerr << '\n';
  for (const auto& [label, n] : histogram) std::cerr << "  " << label << ' ' << n << '\n';
  return 0;
}

int cmd_eval(const std::string& records_path, bool json) {
  std::ifstream in(records_path);
  if (!in) {
    std::cerr << "cannot open " << records_path << '\n';
    return 1;
  }
  const std::vector<EvalRecord> records = read_records(in);
  const MetricsReport report = evaluate(records);
  std::cout << (json ? report.to_json() + "\n" : report.to_table());
  return 0;
}

int cmd_serve(std::uint16_t port, const std::string& config_path, const std::string& address) {
  EngineConfig cfg = load_config_or_default(opt(config_path));
  ServerOptions options;
  options.address = address.empty() ? cfg.bind_address : address;
  options.port = port;
  Server server(std::move(cfg), options);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on ws://" << options.address << ':' << server.port() << std::endl;
  server.run();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gesture-to-gait control engine"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (default: $GESTGAIT_CONFIG)");
  };

  auto* serve = app.add_subcommand("serve", "Run the WebSocket control service");
  std::uint16_t port = 8765;
  std::string address;
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--address", address, "Bind address (default: service.bind_address)");
  add_config(serve);

  auto* replay_cmd = app.add_subcommand("replay", "Replay a trace and write the events log");
  std::string trace_path;
  std::string out_path;
  replay_cmd->add_option("--trace", trace_path, "*.trace.jsonl input")->required();
  replay_cmd->add_option("--out", out_path, "*.events.jsonl output (default: next to the trace)");
  add_config(replay_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "Label every frame of a trace");
  std::string kernel = "auto";
  bool explain = false;
  classify_cmd->add_option("--trace", trace_path, "*.trace.jsonl input")->required();
  classify_cmd->add_option("--kernel", kernel, "Measurement kernel")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();
  classify_cmd->add_flag("--explain", explain, "Print the per-rule predicate breakdown");
  add_config(classify_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Detection metrics over labelled records");
  std::string records_path;
  bool json = false;
  eval_cmd->add_option("--records", records_path, "JSON Lines records")->required();
  eval_cmd->add_flag("--json", json, "Emit JSON instead of a table");

  auto* dump = app.add_subcommand("dump-profiles", "Print the built-in gait profiles as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) return cmd_serve(port, config_path, address);
    if (*replay_cmd) return cmd_replay(trace_path, out_path, config_path);
    if (*classify_cmd) return cmd_classify(trace_path, config_path, kernel, explain);
    if (*eval_cmd) return cmd_eval(records_path, json);
    if (*dump) {
      std::cout << ProfileLibrary::defaults().to_json();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
