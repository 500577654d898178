// Command-line front end: JSON in/out for the direct and inverse spectral
// transforms, spectral-data evolution, trajectory solving by either the
// spectral method or direct RK4 integration, a cross-check mode, and a
// built-in reproduction of the published five-particle example.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtl/rtl.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in)
    throw rtl::ValidationError("BadInput", "cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw rtl::ValidationError("BadOutput", "cannot open output file: " + path);
  out << text;
}

rtl::FlowSpec parse_flow(const std::string& text) {
  if (text == "reciprocal") return rtl::FlowSpec::reciprocal();
  if (text == "identity") return rtl::FlowSpec::identity();
  if (text == "log") return rtl::FlowSpec::log_flow();
  if (text.rfind("power:", 0) == 0) {
    try {
      return rtl::FlowSpec::power(std::stod(text.substr(6)));
    } catch (const std::logic_error&) {
      throw rtl::ValidationError("BadFlow", "cannot parse power exponent in " + text);
    }
  }
  throw rtl::ValidationError(
      "BadFlow", "flow must be reciprocal|identity|log|power:<p>, got " + text);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw rtl::ValidationError("BadArguments", "cannot parse number: " + item);
    }
  }
  return out;
}

std::vector<double> resolve_times(const std::string& times_spec,
                                  const std::string& time_list) {
  if (!times_spec.empty() && !time_list.empty())
    throw rtl::ValidationError("BadArguments",
                               "--times and --time-list are mutually exclusive");
  if (!time_list.empty()) return parse_number_list(time_list);
  if (times_spec.empty())
    throw rtl::ValidationError("BadArguments",
                               "a time grid is required (--times or --time-list)");
  const std::vector<double> parts = parse_number_list(times_spec);
  if (parts.size() != 3)
    throw rtl::ValidationError("BadArguments", "--times expects t_start,t_end,count");
  const double lo = parts[0], hi = parts[1];
  const auto count = static_cast<std::size_t>(parts[2]);
  if (count < 1 || parts[2] != std::floor(parts[2]))
    throw rtl::ValidationError("BadArguments", "--times count must be a positive integer");
  if (count == 1) {
    if (hi != lo)
      throw rtl::ValidationError("BadArguments",
                                 "--times with count 1 needs t_start == t_end");
    return {lo};
  }
  if (!(hi > lo))
    throw rtl::ValidationError("BadArguments", "--times needs t_end > t_start");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::string input_text(const std::string& input, const std::string& data) {
  if (!data.empty()) return data;
  return read_input(input);
}

double max_componentwise_dev(const rtl::Trajectory& x, const rtl::Trajectory& y) {
  double m = 0.0;
  for (std::size_t k = 0; k < x.samples.size(); ++k) {
    for (std::size_t i = 0; i < x.samples[k].a.size(); ++i)
      m = std::max(m, std::abs(x.samples[k].a[i] - y.samples[k].a[i]));
    for (std::size_t i = 0; i < x.samples[k].b.size(); ++i)
      m = std::max(m, std::abs(x.samples[k].b[i] - y.samples[k].b[i]));
  }
  return m;
}

int run_paper_example() {
  const rtl::BidiagonalPencil p0{{3.0, 12.0, 16.0, 7.0, 5.0}, {1.0, 6.0, 11.0, 5.0}};
  const std::vector<double> published_lambda{1.9812757881, 2.6941860907,
                                             6.6927423653, 13.8305993379,
                                             40.8011964181};
  const std::vector<double> published_w{0.0097186754, 0.8409233539, 0.0757415291,
                                        0.0665694128, 0.0070470286};
  const rtl::SpectralData s = rtl::direct_transform(p0);

  std::printf("five-particle example, F(x) = 1/x\n");
  std::printf("initial data: a = (3, 12, 16, 7, 5), b = (1, 6, 11, 5)\n\n");
  std::printf("  j  %-20s %-15s %-20s %-15s\n", "lambda (computed)",
              "lambda (publ.)", "w (computed)", "w (publ.)");
  double dev_lambda = 0.0, dev_w = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    std::printf("  %zu  %-20.12f %-15.10f %-20.12f %-15.10f\n", j + 1, s.lambda[j],
                published_lambda[j], s.w[j], published_w[j]);
    dev_lambda = std::max(dev_lambda, std::abs(s.lambda[j] - published_lambda[j]));
    dev_w = std::max(dev_w, std::abs(s.w[j] - published_w[j]));
  }
  std::printf("\nmax |lambda - published| = %.3e\n", dev_lambda);
  std::printf("max |w - published|      = %.3e\n", dev_w);

  const rtl::BidiagonalPencil back =
      rtl::inverse_transform(rtl::make_spectral_data(published_lambda, published_w));
  double dev_pencil = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    dev_pencil = std::max(dev_pencil, std::abs(back.a[i] - p0.a[i]));
  for (std::size_t i = 0; i < 4; ++i)
    dev_pencil = std::max(dev_pencil, std::abs(back.b[i] - p0.b[i]));
  std::printf("published table mapped back: max pencil deviation = %.3e\n",
              dev_pencil);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral-transform solver for the finite relativistic Toda lattice"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string output = "-";
  std::string data;
  std::string flow_text = "reciprocal";
  std::string times_spec;
  std::string time_list;
  std::string format = "csv";
  std::string weights_method = "residues";
  std::string inverse_method = "tfraction";
  double time_value = 0.0;
  double dt = 1e-4;
  double tol = 1e-6;

  const auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "input file, '-' for stdin");
    cmd->add_option("--output", output, "output file, '-' for stdout");
    cmd->add_option("--data", data, "inline JSON input (instead of --input)");
  };
  const auto add_flow = [&](CLI::App* cmd) {
    cmd->add_option("--flow", flow_text, "reciprocal|identity|log|power:<p>");
  };
  const auto add_times = [&](CLI::App* cmd) {
    cmd->add_option("--times", times_spec, "uniform grid t_start,t_end,count");
    cmd->add_option("--time-list", time_list, "explicit comma-separated times");
  };

  CLI::App* cmd_direct =
      app.add_subcommand("direct", "pencil {\"a\",\"b\"} -> spectral {\"lambda\",\"w\"}");
  add_io(cmd_direct);
  cmd_direct->add_option("--weights", weights_method,
                         "weight algorithm: residues|eigenvectors");

  CLI::App* cmd_inverse =
      app.add_subcommand("inverse", "spectral {\"lambda\",\"w\"} -> pencil {\"a\",\"b\"}");
  add_io(cmd_inverse);
  cmd_inverse->add_option("--method", inverse_method,
                          "inverse algorithm: tfraction|stieltjes");

  CLI::App* cmd_evolve =
      app.add_subcommand("evolve", "evolve spectral data to a single time");
  add_io(cmd_evolve);
  add_flow(cmd_evolve);
  cmd_evolve->add_option("--time", time_value, "evolution time")->required();

  CLI::App* cmd_traj =
      app.add_subcommand("trajectory", "solve on a time grid via the spectral method");
  add_io(cmd_traj);
  add_flow(cmd_traj);
  add_times(cmd_traj);
  cmd_traj->add_option("--format", format, "json|csv");

  CLI::App* cmd_sim =
      app.add_subcommand("simulate", "solve on a time grid via fixed-step RK4");
  add_io(cmd_sim);
  add_flow(cmd_sim);
  add_times(cmd_sim);
  cmd_sim->add_option("--format", format, "json|csv");
  cmd_sim->add_option("--dt", dt, "RK4 step size");

  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "run trajectory and simulate on the same input and compare");
  add_io(cmd_verify);
  add_flow(cmd_verify);
  add_times(cmd_verify);
  cmd_verify->add_option("--dt", dt, "RK4 step size");
  cmd_verify->add_option("--tol", tol, "acceptance threshold for the deviation");

  app.add_subcommand("paper-example",
                     "reproduce the published five-particle spectral table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "{\"error\":{\"kind\":\"BadArguments\",\"detail\":\""
              << e.what() << "\"}}\n";
    return 1;
  }

  try {
    if (cmd_direct->parsed()) {
      const rtl::BidiagonalPencil p =
          rtl::pencil_from_json_text(input_text(input, data));
      rtl::SpectralData s;
      if (weights_method == "residues") {
        s = rtl::direct_transform(p);
      } else if (weights_method == "eigenvectors") {
        std::vector<double> lambda = rtl::generalized_eigenvalues(p);
        std::vector<double> w = rtl::weights_from_eigenvectors(p, lambda);
        s = rtl::make_spectral_data(std::move(lambda), std::move(w));
      } else {
        throw rtl::ValidationError("BadArguments",
                                   "--weights must be residues or eigenvectors");
      }
      write_output(output, rtl::spectral_to_json_text(s));
    } else if (cmd_inverse->parsed()) {
      const rtl::SpectralData s =
          rtl::spectral_from_json_text(input_text(input, data));
      rtl::BidiagonalPencil p;
      if (inverse_method == "tfraction") {
        p = rtl::inverse_transform(s);
      } else if (inverse_method == "stieltjes") {
        p = rtl::inverse_transform_stieltjes(s);
      } else {
        throw rtl::ValidationError("BadArguments",
                                   "--method must be tfraction or stieltjes");
      }
      write_output(output, rtl::pencil_to_json_text(p));
    } else if (cmd_evolve->parsed()) {
      const rtl::SpectralData s =
          rtl::spectral_from_json_text(input_text(input, data));
      const rtl::SpectralData out =
          rtl::evolve_weights(s, parse_flow(flow_text), time_value);
      write_output(output, rtl::spectral_to_json_text(out));
    } else if (cmd_traj->parsed() || cmd_sim->parsed()) {
      const rtl::BidiagonalPencil p =
          rtl::pencil_from_json_text(input_text(input, data));
      const std::vector<double> times = resolve_times(times_spec, time_list);
      const rtl::FlowSpec F = parse_flow(flow_text);
      const rtl::Trajectory traj = cmd_traj->parsed()
                                       ? rtl::solve_trajectory(p, F, times)
                                       : rtl::integrate_at(p, F, times, dt);
      if (format == "csv")
        write_output(output, rtl::trajectory_to_csv(traj));
      else if (format == "json")
        write_output(output, rtl::trajectory_to_json_text(traj));
      else
        throw rtl::ValidationError("BadArguments", "--format must be json or csv");
    } else if (cmd_verify->parsed()) {
      const rtl::BidiagonalPencil p =
          rtl::pencil_from_json_text(input_text(input, data));
      const std::vector<double> times = resolve_times(times_spec, time_list);
      const rtl::FlowSpec F = parse_flow(flow_text);
      const rtl::Trajectory spectral = rtl::solve_trajectory(p, F, times);
      const rtl::Trajectory ode = rtl::integrate_at(p, F, times, dt);
      const double dev = max_componentwise_dev(spectral, ode);
      const bool pass = dev < tol;
      write_output(output, std::string("{\"max_deviation\":") +
                               rtl::format_double(dev) +
                               ",\"tol\":" + rtl::format_double(tol) +
                               ",\"pass\":" + (pass ? "true" : "false") + "}\n");
      return pass ? 0 : 1;
    } else {
      return run_paper_example();
    }
  } catch (const rtl::ValidationError& e) {
    std::cerr << rtl::error_to_json_text(e);
    return 1;
  } catch (const rtl::NumericError& e) {
    std::cerr << rtl::error_to_json_text(e);
    return 2;
  } catch (const rtl::Error& e) {
    std::cerr << rtl::error_to_json_text(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":{\"kind\":\"Internal\",\"detail\":\"" << e.what()
              << "\"}}\n";
    return 1;
  }
  return 0;
}
