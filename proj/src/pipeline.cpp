#include <fstream>
#include <sstream>

#include "invman/system_io.hpp"

namespace invman {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

template <Scalar T>
void run_mode(const RunConfig& cfg, const SystemFile& sys, std::ostream& diag) {
  const auto vf = make_vector_field<T>(sys);
  CertifyOptions opts;
  opts.rho = cfg.rho;
  const auto run = certify(vf, cfg.order, opts);
  const auto& cert = run.certificate;

  std::filesystem::create_directories(cfg.out_dir);
  write_file(cfg.out_dir / "certificate.json", certificate_json(cert));
  write_file(cfg.out_dir / "coefficients.csv", coefficients_csv(run.stable, run.unstable));

  const bool interval = is_interval_v<T>;
  const auto stable = emit_enclosure_samples(run.stable, cert, cfg.samples);
  const auto unstable = emit_enclosure_samples(run.unstable, cert, cfg.samples);
  write_file(cfg.out_dir / "enclosure_stable.csv", enclosure_csv("stable", vf.dim(), interval, stable));
  write_file(cfg.out_dir / "enclosure_unstable.csv", enclosure_csv("unstable", vf.dim(), interval, unstable));
  write_file(cfg.out_dir / "plot_manifolds.py", plot_script());

  if (cfg.normal_form_order) {
    const auto g = normal_form_tail(vf, run.stable, run.unstable, *cfg.normal_form_order);
    write_file(cfg.out_dir / "normal_form.csv", normal_form_csv(g));
  }

  diag << "certified (" << mode_name<T>() << "): r_theta = " << format_double(cert.r_theta)
       << ", M = " << format_double(cert.M) << ", C = " << format_double(cert.C) << ", Omega = " << cert.omega
       << ", shrinks = " << cert.shrink_iterations << '\n';
}

}  // namespace

int run_pipeline(const RunConfig& cfg, std::ostream& diag) {
  try {
    if (cfg.order < 2) throw ValidationError("order must be at least 2");
    if (cfg.samples < 0) throw ValidationError("sample count must be non-negative");
    if (cfg.normal_form_order && *cfg.normal_form_order > cfg.order)
      throw ValidationError("normal-form order cannot exceed the parametrisation order");
    const SystemFile sys = parse_system_file(read_file(cfg.input));
    if (cfg.mode == Mode::Float)
      run_mode<double>(cfg, sys, diag);
    else
      run_mode<Interval>(cfg, sys, diag);
    return kSuccess;
  } catch (const ParseError& e) {
    diag << "error: parse: " << e.what() << '\n';
    return kParseError;
  } catch (const ValidationError& e) {
    diag << "error: invalid input: " << e.what() << '\n';
    return kParseError;
  } catch (const OrderingViolation& e) {
    diag << "error: invalid input: " << e.what() << '\n';
    return kParseError;
  } catch (const SignViolation& e) {
    diag << "error: invalid input: " << e.what() << '\n';
    return kParseError;
  } catch (const OrderTooSmall& e) {
    diag << "error: invalid input: " << e.what() << '\n';
    return kParseError;
  } catch (const ResonanceDetected& e) {
    diag << "error: " << e.what() << '\n';
    return kResonance;
  } catch (const InconclusiveInterval& e) {
    diag << "error: inconclusive interval check: " << e.what() << '\n';
    return kInconclusive;
  } catch (const TailDiverges& e) {
    diag << "error: " << e.what() << '\n';
    return kTailDiverges;
  } catch (const MaxIterationsExceeded& e) {
    diag << "error: " << e.what() << '\n';
    return kIterationCap;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace invman
