// hasse-forge: point counts, zeta functions, Frobenius spectra and regularized
// determinants for a variety described by a JSON spec, or by a spectrum text
// file as written by the spectrum command.
//
// Exit status: 0 success, 1 a check failed, 2 bad input.

#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hasse_forge/regdet.hpp"
#include "hasse_forge/spec_json.hpp"
#include "hasse_forge/spectrum.hpp"
#include "hasse_forge/varieties.hpp"

namespace hf = hasse_forge;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

struct Options {
  std::string spec_path;
  std::string s_list = "2,3,1.5+0.7i,2-1.3i";
  unsigned max_m = 0;
  std::string delta = "1";
  double tol = 1e-8;
  std::string csv_path;
};

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const char* begin = text.data();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw hf::Error(hf::ErrorKind::BadParameter, "cannot read " + what + " '" + text + "'");
  return v;
}

// "2", "-1.3i", "1.5+0.7i", "2-1.3i", "1e-3+2i"
hf::Complex parse_complex(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(), ::isspace), text.end());
  if (text.empty()) throw hf::Error(hf::ErrorKind::BadParameter, "empty number");
  if (text.back() != 'i') return parse_real(text, "number");
  text.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "0" : text.substr(0, split);
  std::string im = split == std::string::npos ? text : text.substr(split);
  if (im.empty() || im == "+" || im == "-") im += "1";
  return {parse_real(re, "number"), parse_real(im, "number")};
}

std::vector<hf::Complex> parse_complex_list(const std::string& text) {
  std::vector<hf::Complex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  if (out.empty()) throw hf::Error(hf::ErrorKind::BadParameter, "empty --s list");
  return out;
}

// A JSON variety spec, or an exported Frobenius spectrum.
struct Input {
  std::optional<hf::VarietySpec> spec;
  std::optional<hf::FrobeniusSpectrum> spectrum;
};

Input load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hf::Error(hf::ErrorKind::SpecParse, "cannot open spec file " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  Input input;
  if (first != std::string::npos && text[first] == '{') {
    input.spec = hf::parse_variety_spec(text);
  } else {
    std::istringstream is(text);
    input.spectrum = hf::read_spectrum(is);
  }
  return input;
}

bool is_input_error(hf::ErrorKind k) {
  switch (k) {
    case hf::ErrorKind::RootFindingDiverged:
    case hf::ErrorKind::Singular:
    case hf::ErrorKind::IllConditioned:
    case hf::ErrorKind::IdentityViolated:
    case hf::ErrorKind::DivisionByZero:
      return false;
    default:
      return true;
  }
}

hf::ZetaRational zeta_for(const Input& input, const Options& opt) {
  if (input.spectrum) return hf::zeta_from_spectrum(*input.spectrum);
  const auto& spec = *input.spec;
  if (opt.max_m == 0 || std::holds_alternative<hf::CustomVariety>(spec.kind())) return hf::zeta_of(spec);
  return hf::zeta_from_counts(hf::point_counts(spec, opt.max_m), spec.betti());
}

hf::FrobeniusSpectrum spectrum_for(const Input& input, const Options& opt) {
  return input.spectrum ? *input.spectrum : hf::spectrum_from_zeta(zeta_for(input, opt));
}

void write_output(const Options& opt, const std::string& text) {
  std::cout << text;
  if (opt.csv_path.empty()) return;
  std::ofstream out(opt.csv_path);
  if (!out) throw hf::Error(hf::ErrorKind::BadParameter, "cannot write " + opt.csv_path);
  out << text;
}

int run_count(const Options& opt) {
  const auto input = load_input(opt.spec_path);
  std::string text = "m,count\n";
  if (input.spec) {
    const unsigned max_m = opt.max_m ? opt.max_m : hf::required_count_number(input.spec->betti());
    for (unsigned m = 1; m <= max_m; ++m) text += std::to_string(m) + ',' + hf::count_points(*input.spec, m).str() + '\n';
  } else {
    const auto zeta = hf::zeta_from_spectrum(*input.spectrum);
    const unsigned max_m = opt.max_m ? opt.max_m : hf::required_count_number(zeta.betti());
    for (unsigned m = 1; m <= max_m; ++m) text += std::to_string(m) + ',' + zeta.count(m).str() + '\n';
  }
  write_output(opt, text);
  return 0;
}

int run_zeta(const Options& opt) {
  const auto input = load_input(opt.spec_path);
  const auto zeta = zeta_for(input, opt);
  std::ostringstream os;
  os << (input.spec ? input.spec->describe() : std::string("imported spectrum")) << '\n' << "q = " << zeta.q << ", betti =";
  for (auto b : zeta.betti()) os << ' ' << b;
  os << '\n' << zeta.to_string();
  const auto fe = hf::functional_equation_check(zeta);
  const auto weil = hf::weil_bound_check(zeta);
  os << "functional equation: " << (fe.ok ? "ok" : "FAILED") << " (max deviation " << hf::format_double(fe.max_deviation)
     << ")\n";
  os << "Weil bounds: " << (weil.ok ? "ok" : "FAILED") << " (max relative deviation "
     << hf::format_double(weil.max_relative_deviation) << ")\n";
  write_output(opt, os.str());
  return fe.ok && weil.ok ? 0 : kExitFailure;
}

int run_spectrum(const Options& opt) {
  const auto spectrum = spectrum_for(load_input(opt.spec_path), opt);
  std::ostringstream os;
  hf::write_spectrum(os, spectrum);
  // Weil residuals as comments, so the output still reads back as a spectrum
  os << "# i |lambda| q^(i/2) relerr\n";
  const double q = static_cast<double>(spectrum.q);
  for (std::size_t i = 0; i < spectrum.degrees.size(); ++i) {
    const double expected = std::pow(q, static_cast<double>(i) / 2.0);
    for (const auto& e : spectrum.degrees[i]) {
      const double mod = std::abs(e.lambda);
      os << "# " << i << ' ' << hf::format_double(mod) << ' ' << hf::format_double(expected) << ' '
         << hf::format_double(std::abs(mod - expected) / expected) << '\n';
    }
  }
  const auto weights = hf::frobenius_weight_relation(spectrum);
  write_output(opt, os.str());
  return weights.ok ? 0 : kExitFailure;
}

int run_regdet(const Options& opt) {
  const auto model = hf::build_tp_model(spectrum_for(load_input(opt.spec_path), opt));
  const hf::Complex delta = parse_complex(opt.delta);
  std::string text = "s,class,det_re,det_im,zero_order,dim_inf_re,dim_inf_im\n";
  bool ok = true;
  for (const auto& s : parse_complex_list(opt.s_list)) {
    for (auto parity : {hf::Parity::Even, hf::Parity::Odd}) {
      const auto d = hf::regdet_parity_class(model, parity, s, delta);
      const auto dim = hf::dim_infty(model, parity, s, delta);
      if (!(std::abs(dim) <= 1e-10)) ok = false;
      text += hf::format_complex(s) + ',' + hf::to_string(parity) + ',' + hf::format_double(d.value.real()) + ',' +
              hf::format_double(d.value.imag()) + ',' + std::to_string(d.zero_order) + ',' +
              hf::format_double(dim.real()) + ',' + hf::format_double(dim.imag()) + '\n';
    }
  }
  write_output(opt, text);
  return ok ? 0 : kExitFailure;
}

int run_verify(const Options& opt) {
  const auto input = load_input(opt.spec_path);
  hf::VerifyOptions vo;
  vo.tolerance = opt.tol;
  vo.delta = parse_complex(opt.delta);
  const auto rows = hf::verify_theorem_a(zeta_for(input, opt), parse_complex_list(opt.s_list), vo);
  std::ostringstream os;
  hf::write_verify_csv(os, rows);
  write_output(opt, os.str());
  return hf::all_passed(rows) ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hasse-forge: zeta functions of varieties over finite fields as regularized determinants"};
  app.require_subcommand(1, 1);
  Options opt;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"count", "point counts N_1..N_M", run_count},
      {"zeta", "rational zeta function P_0..P_2d with consistency checks", run_zeta},
      {"spectrum", "Frobenius spectrum as text records: i re im mult jordan", run_spectrum},
      {"regdet", "regularized determinants per parity class at each s", run_regdet},
      {"verify", "compare zeta(X, s) with det(s - Theta | TP_od) / det(s - Theta | TP_ev)", run_verify},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--spec", opt.spec_path, "variety spec (JSON) or spectrum text file")->required();
    sub->add_option("--s", opt.s_list, "comma-separated sample points, e.g. 2,1.5+0.7i")->capture_default_str();
    sub->add_option("--max-m", opt.max_m, "number of point counts to use");
    sub->add_option("--delta", opt.delta, "scale of the regularized determinant")->capture_default_str();
    sub->add_option("--tol", opt.tol, "relative tolerance for verify")->capture_default_str();
    sub->add_option("--csv", opt.csv_path, "also write the output to this file");
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  try {
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->run(opt);
    }
  } catch (const hf::Error& e) {
    std::cerr << "hasse-forge: " << e.what() << '\n';
    return is_input_error(e.kind()) ? kExitInput : kExitFailure;
  }
  return kExitInput;
}
