#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "thompson/revealing.hpp"
#include "thompson/tits.hpp"
#include "thompson/vbar.hpp"
#include "thompson/words.hpp"

namespace thompson::cli {

namespace {

struct Failure {
  int code;
};

struct Line {
  std::size_t number;
  std::string text;
};

class Input {
 public:
  Input(std::istream& stdin_stream, std::ostream& err) : stdin_(stdin_stream), err_(err) {}

  std::string path = "-";

  const std::string& text() {
    if (loaded_) return text_;
    loaded_ = true;
    if (path == "-") {
      text_.assign(std::istreambuf_iterator<char>(stdin_), {});
    } else {
      std::ifstream f(path);
      if (!f) {
        err_ << path << ": cannot open\n";
        throw Failure{1};
      }
      text_.assign(std::istreambuf_iterator<char>(f), {});
    }
    return text_;
  }

  // Nonblank lines with `#` comments removed.
  std::vector<Line> lines() {
    std::vector<Line> out;
    std::istringstream s(text());
    std::string line;
    std::size_t n = 0;
    while (std::getline(s, line)) {
      ++n;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back({n, line});
    }
    return out;
  }

  std::vector<TreePair> elements() {
    std::vector<TreePair> out;
    for (const auto& l : lines()) out.push_back(TreePair::parse(l.text, l.number));
    return out;
  }

  const std::string& name() const { return path == "-" ? stdin_name_ : path; }

 private:
  std::istream& stdin_;
  std::ostream& err_;
  std::string text_;
  bool loaded_ = false;
  const std::string stdin_name_ = "<stdin>";
};

void require_count(const std::vector<TreePair>& e, std::size_t lo, std::size_t hi, std::ostream& err,
                   const char* what) {
  if (e.size() < lo || e.size() > hi) {
    err << what << "\n";
    throw Failure{1};
  }
}

std::vector<CantorPoint> points(const std::vector<std::string>& text, int arity, std::ostream& err) {
  std::vector<CantorPoint> out;
  for (const auto& t : text) {
    try {
      out.push_back(CantorPoint::parse(t, arity));
    } catch (const ParseError& e) {
      err << "--point '" << t << "': " << e.what() << "\n";
      throw Failure{1};
    }
  }
  return out;
}

std::string cell_text(const std::vector<Address>& cell) {
  std::string s;
  for (const auto& a : cell) s += (s.empty() ? "" : " ") + a.to_string();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Higman-Thompson groups V_n: elements, dynamics, Tits alternative, word invariants",
               "thompson"};
  app.require_subcommand(1);
  Input input(in, err);
  const auto with_input = [&](CLI::App* c) {
    c->add_option("-i,--input", input.path, "input file, - for stdin")->capture_default_str();
    return c;
  };

  bool reduce_result = false;
  auto* compose_cmd = with_input(app.add_subcommand("compose", "compose elements, first line applied first"));
  compose_cmd->add_flag("--reduce", reduce_result, "reduce the result");
  auto* inverse_cmd = with_input(app.add_subcommand("inverse", "inverse of each element"));
  auto* reduce_cmd = with_input(app.add_subcommand("reduce", "reduced form of each element"));
  auto* equal_cmd = with_input(app.add_subcommand("equal", "compare two elements"));

  std::vector<std::string> point_text;
  bool backwards = false;
  auto* apply_cmd = with_input(app.add_subcommand("apply", "image of points under one element"));
  apply_cmd->add_option("-p,--point", point_text, "point u(v)")->required();
  apply_cmd->add_flag("--inverse", backwards, "apply the inverse");

  std::size_t orbit_budget = 4096;
  auto* orbit_cmd = with_input(app.add_subcommand("orbit", "orbit of a point under a group"));
  orbit_cmd->add_option("-p,--point", point_text, "point u(v)")->required();
  orbit_cmd->add_option("--budget", orbit_budget, "largest orbit to enumerate")->capture_default_str();

  auto* reveal_cmd = with_input(app.add_subcommand("reveal", "revealing pair and leaf classes"));
  auto* dynamics_cmd = with_input(app.add_subcommand("dynamics", "periodic points and U/V"));
  auto* phi_cmd = with_input(app.add_subcommand("phi", "embed signed elements of Vbar_2 into V_2"));

  DecideOptions decide_opts;
  std::string verify_path;
  auto* decide_cmd = with_input(app.add_subcommand("decide", "finite orbit or free subgroup"));
  decide_cmd->add_option("--budget", decide_opts.budget, "epochs (word length)")->capture_default_str();
  decide_cmd->add_option("--seed", decide_opts.seed, "seed for the harmonic candidates")->capture_default_str();
  decide_cmd->add_option("--orbit-budget", decide_opts.orbit_budget)->capture_default_str();
  decide_cmd->add_option("--m-cap", decide_opts.m_cap)->capture_default_str();
  decide_cmd->add_option("--k-max", decide_opts.k_max)->capture_default_str();
  decide_cmd->add_option("--verify", verify_path, "replay a stored certificate instead of searching");

  int genus = 1;
  bool cyclic = false;
  std::vector<std::string> word_text;
  auto* cword_cmd = with_input(app.add_subcommand("cword", "largest nontrivial power inside a word"));
  cword_cmd->add_option("--genus", genus, "surface genus")->capture_default_str();
  cword_cmd->add_option("-w,--word", word_text, "word (otherwise one per input line)");
  cword_cmd->add_flag("--cyclic", cyclic, "maximize over cyclic rotations");

  std::size_t length_bound = 6;
  auto* cooper_cmd = with_input(app.add_subcommand("cooper-check", "co(f(w), f(w')) <= Lambda(f)^2"));
  cooper_cmd->add_option("--length", length_bound, "longest w, w'")->capture_default_str();

  HarmonicOptions harmonic_opts;
  std::string weight_text;
  auto* harmonic_cmd = with_input(app.add_subcommand("harmonic", "random-walk occupation of cells"));
  harmonic_cmd->add_option("-p,--point", point_text, "basepoint coordinates");
  harmonic_cmd->add_option("--length", harmonic_opts.walk_length)->capture_default_str();
  harmonic_cmd->add_option("--samples", harmonic_opts.samples)->capture_default_str();
  harmonic_cmd->add_option("--depth", harmonic_opts.depth)->capture_default_str();
  harmonic_cmd->add_option("--seed", harmonic_opts.seed)->capture_default_str();
  harmonic_cmd->add_option("--weights", weight_text, "comma-separated, order g0 g0^-1 g1 ...");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    try {
      if (compose_cmd->parsed()) {
        const auto e = input.elements();
        require_count(e, 1, SIZE_MAX, err, "compose needs at least one element");
        TreePair r = e.front();
        for (std::size_t i = 1; i < e.size(); ++i) r = compose(r, e[i]);
        out << (reduce_result ? reduce(r) : r) << "\n";
      } else if (inverse_cmd->parsed()) {
        for (const auto& f : input.elements()) out << inverse(f) << "\n";
      } else if (reduce_cmd->parsed()) {
        for (const auto& f : input.elements()) out << reduce(f) << "\n";
      } else if (equal_cmd->parsed()) {
        const auto e = input.elements();
        require_count(e, 2, 2, err, "equal needs exactly two elements");
        out << (equal(e[0], e[1]) ? "EQUAL" : "NOT EQUAL") << "\n";
      } else if (apply_cmd->parsed()) {
        const auto e = input.elements();
        require_count(e, 1, 1, err, "apply needs exactly one element");
        for (const auto& p : points(point_text, e[0].arity(), err)) {
          out << p << " -> " << (backwards ? apply_inverse(e[0], p) : apply(e[0], p)) << "\n";
        }
      } else if (orbit_cmd->parsed()) {
        const Subgroup g = Subgroup::parse(input.text());
        int code = 0;
        for (const auto& p : points(point_text, g.arity, err)) {
          if (const auto o = finite_orbit(g, p, orbit_budget)) {
            out << "ORBIT " << p << " size=" << o->size() << " [";
            for (std::size_t i = 0; i < o->size(); ++i) out << (i ? " " : "") << (*o)[i];
            out << "]\n";
          } else {
            out << "EXHAUSTED " << p << " budget=" << orbit_budget << "\n";
            code = 2;
          }
        }
        return code;
      } else if (reveal_cmd->parsed()) {
        bool first = true;
        for (const auto& f : input.elements()) {
          const RevealingPair rp = to_revealing(f);
          if (!first) out << "\n";
          first = false;
          out << rp.base << "\n";
          out << "X-ROOTS " << ClopenSet::normalize(f.arity(), rp.x_roots) << "\n";
          out << "Y-ROOTS " << ClopenSet::normalize(f.arity(), rp.y_roots) << "\n";
          for (const auto& c : classify_leaves(rp)) {
            out << "LEAF " << c.leaf << " " << to_string(c.kind);
            if (c.kind == LeafKind::NeutralPeriodic) {
              out << " t=" << c.t;
            } else {
              out << " r=" << c.r << " s=" << c.s;
            }
            out << "\n";
          }
        }
      } else if (dynamics_cmd->parsed()) {
        bool first = true;
        for (const auto& f : input.elements()) {
          if (!first) out << "\n";
          first = false;
          out << format_dynamics(dynamics(f));
        }
      } else if (phi_cmd->parsed()) {
        for (const auto& l : input.lines()) out << phi(SignedTreePair::parse(l.text, l.number)) << "\n";
      } else if (decide_cmd->parsed()) {
        const Subgroup g = Subgroup::parse(input.text());
        if (!verify_path.empty()) {
          Input cert(in, err);
          cert.path = verify_path;
          std::optional<Certificate> c;
          try {
            c = parse_certificate(cert.text(), g.arity);
          } catch (const ParseError& e) {
            err << cert.name() << ":" << e.what() << "\n";
            return 1;
          }
          if (const auto why = verify_certificate(g, *c)) {
            out << "VERIFY FAILED: " << *why << "\n";
            return 1;
          }
          out << "VERIFIED\n";
          return 0;
        }
        const Certificate c = decide(g, decide_opts);
        out << format_certificate(c);
        return std::holds_alternative<Undecided>(c) ? 2 : 0;
      } else if (cword_cmd->parsed()) {
        std::vector<Line> words;
        for (const auto& w : word_text) words.push_back({1, w});
        if (word_text.empty()) words = input.lines();
        for (const auto& l : words) {
          Word w;
          try {
            w = parse_word(l.text, l.number);
          } catch (const ParseError& e) {
            if (word_text.empty()) throw;
            err << "--word: " << e.what() << "\n";
            return 1;
          }
          out << (cyclic ? c_class(w, genus) : c_word(w, genus)) << "\n";
        }
      } else if (cooper_cmd->parsed()) {
        int code = 0;
        for (const auto& l : input.lines()) {
          const FreeAutomorphism f = FreeAutomorphism::parse(l.text, l.number);
          const CooperReport r = cooper_check(f, length_bound);
          out << (r.pass ? "PASS" : "FAIL") << " lambda=" << r.lambda << " bound=" << r.bound
              << " max_co=" << r.max_co << " pairs=" << r.pairs;
          if (r.counterexample) {
            out << " w=\"" << to_string(r.counterexample->first) << "\" w'=\""
                << to_string(r.counterexample->second) << "\"";
            code = 1;
          }
          out << "  # " << f.to_string() << "\n";
        }
        return code;
      } else if (harmonic_cmd->parsed()) {
        const Subgroup g = Subgroup::parse(input.text());
        if (point_text.empty()) point_text.push_back("(0)");
        std::stringstream ws(weight_text);
        for (std::string item; std::getline(ws, item, ',');) {
          try {
            harmonic_opts.weights.push_back(std::stod(item));
          } catch (const std::exception&) {
            err << "bad weight '" << item << "'\n";
            return 1;
          }
        }
        for (const auto& c : harmonic_estimate(g, points(point_text, g.arity, err), harmonic_opts)) {
          char mass[32];
          std::snprintf(mass, sizeof mass, "%.6f", c.mass);
          out << cell_text(c.cell) << " " << mass << "\n";
        }
      }
    } catch (const ParseError& e) {
      err << input.name() << ":" << e.what() << "\n";
      return 1;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}

}  // namespace thompson::cli
