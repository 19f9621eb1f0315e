#include "latvoa/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace latvoa {

namespace {

struct Tokenized {
  int lineno;
  std::vector<std::string> tokens;
};

std::vector<Tokenized> tokenize(const std::string& text) {
  std::vector<Tokenized> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Tokenized t;
    t.lineno = lineno;
    std::string tok;
    while (ls >> tok) t.tokens.push_back(tok);
    if (!t.tokens.empty()) out.push_back(std::move(t));
  }
  return out;
}

bool parse_i64(const std::string& s, int64_t& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

ProblemInstance parse_problem_text(const std::string& text, const std::string& origin) {
  ProblemInstance p;
  std::vector<std::string> errors;
  auto err = [&](int lineno, const std::string& msg) {
    errors.push_back(origin + ":" + std::to_string(lineno) + ": " + msg);
  };

  auto lines = tokenize(text);
  std::string section;
  bool have_rank = false, have_deg = false, have_deg_star = false;
  std::vector<std::vector<std::vector<int64_t>>> fan_cones;
  bool have_fan = false;

  auto read_coords = [&](const Tokenized& t, std::size_t from, std::size_t count,
                         std::vector<int64_t>& out) {
    out.clear();
    for (std::size_t i = from; i < from + count && i < t.tokens.size(); ++i) {
      int64_t v;
      if (!parse_i64(t.tokens[i], v)) {
        err(t.lineno, "expected integer, got '" + t.tokens[i] + "'");
        return false;
      }
      out.push_back(v);
    }
    if (out.size() != count) {
      err(t.lineno, "expected " + std::to_string(count) + " integer coordinates");
      return false;
    }
    return true;
  };

  for (const auto& t : lines) {
    const auto& tok = t.tokens;
    if (tok.size() == 2 && tok[1] == "{") {
      if (!section.empty()) {
        err(t.lineno, "nested section '" + tok[0] + "'");
        continue;
      }
      static const std::set<std::string> known = {"lattice", "delta", "delta_star",
                                                  "fan", "heights", "window"};
      if (!known.count(tok[0])) {
        err(t.lineno, "unknown section '" + tok[0] + "'");
        continue;
      }
      section = tok[0];
      if (section == "fan") have_fan = true;
      continue;
    }
    if (tok.size() == 1 && tok[0] == "}") {
      if (section.empty()) err(t.lineno, "stray '}'");
      section.clear();
      continue;
    }

    if (section.empty()) {
      if (tok[0] == "pipeline" && tok.size() == 2) {
        static const std::set<std::string> known = {"blocks", "chart", "bundle", "hypersurface",
                                                    "master", "stringy", "character", "verify"};
        if (!known.count(tok[1]))
          err(t.lineno, "unknown pipeline '" + tok[1] + "'");
        else
          p.pipeline = tok[1];
      } else if (tok[0] == "seed" && tok.size() == 2) {
        int64_t v;
        if (!parse_i64(tok[1], v) || v < 0)
          err(t.lineno, "seed must be a non-negative integer");
        else
          p.seed = static_cast<uint64_t>(v);
      } else if (tok[0] == "deg") {
        std::vector<int64_t> c;
        if (read_coords(t, 1, tok.size() - 1, c)) {
          p.deg = lv(Side::M, c);
          have_deg = true;
        }
      } else if (tok[0] == "deg_star") {
        std::vector<int64_t> c;
        if (read_coords(t, 1, tok.size() - 1, c)) {
          p.deg_star = lv(Side::N, c);
          have_deg_star = true;
        }
      } else {
        err(t.lineno, "unknown top-level key '" + tok[0] + "'");
      }
      continue;
    }

    if (section == "lattice") {
      if (tok[0] == "rank" && tok.size() == 2) {
        int64_t v;
        if (!parse_i64(tok[1], v) || v < 1 || v > 4)
          err(t.lineno, "rank must be an integer in [1,4]");
        else {
          p.rank = static_cast<int>(v);
          have_rank = true;
        }
      } else {
        err(t.lineno, "unknown lattice key '" + tok[0] + "'");
      }
    } else if (section == "delta" || section == "delta_star") {
      bool star = (section == "delta_star");
      if (tok[0] != "point") {
        err(t.lineno, "unknown " + section + " key '" + tok[0] + "'");
        continue;
      }
      if (!have_rank) {
        err(t.lineno, "rank must be declared before points");
        continue;
      }
      if (tok.size() != static_cast<std::size_t>(p.rank) + 2) {
        err(t.lineno, "point needs " + std::to_string(p.rank) + " coordinates and a value");
        continue;
      }
      std::vector<int64_t> c;
      if (!read_coords(t, 1, p.rank, c)) continue;
      const std::string& val = tok.back();
      std::optional<Rational> value;
      if (val != "random") {
        try {
          value = parse_rational(val);
        } catch (const InputError& e) {
          err(t.lineno, e.what());
          continue;
        }
        if (*value == 0) {
          err(t.lineno, "coefficient must be nonzero (use 'random' to draw one)");
          continue;
        }
      }
      if (star) {
        p.delta_star_points.push_back(lv(Side::N, c));
        p.g_values.push_back(value);
      } else {
        p.delta_points.push_back(lv(Side::M, c));
        p.f_values.push_back(value);
      }
    } else if (section == "fan") {
      if (tok[0] != "cone") {
        err(t.lineno, "unknown fan key '" + tok[0] + "'");
        continue;
      }
      if (!have_rank) {
        err(t.lineno, "rank must be declared before the fan");
        continue;
      }
      // generators separated by ';'
      std::vector<std::vector<int64_t>> gens;
      std::vector<int64_t> cur;
      bool bad = false;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] == ";") {
          if (static_cast<int>(cur.size()) != p.rank) {
            err(t.lineno, "generator needs " + std::to_string(p.rank) + " coordinates");
            bad = true;
            break;
          }
          gens.push_back(cur);
          cur.clear();
          continue;
        }
        int64_t v;
        if (!parse_i64(tok[i], v)) {
          err(t.lineno, "expected integer, got '" + tok[i] + "'");
          bad = true;
          break;
        }
        cur.push_back(v);
      }
      if (bad) continue;
      if (!cur.empty()) {
        if (static_cast<int>(cur.size()) != p.rank) {
          err(t.lineno, "generator needs " + std::to_string(p.rank) + " coordinates");
          continue;
        }
        gens.push_back(cur);
      }
      fan_cones.push_back(gens);
    } else if (section == "heights") {
      if (tok[0] != "at" || !have_rank ||
          tok.size() != static_cast<std::size_t>(p.rank) + 2) {
        err(t.lineno, "heights lines look like: at <coords> <rational>");
        continue;
      }
      std::vector<int64_t> c;
      if (!read_coords(t, 1, p.rank, c)) continue;
      try {
        p.heights[lv(Side::N, c)] = parse_rational(tok.back());
      } catch (const InputError& e) {
        err(t.lineno, e.what());
      }
    } else if (section == "window") {
      auto set_i64 = [&](int64_t& field) {
        int64_t v;
        if (tok.size() != 2 || !parse_i64(tok[1], v))
          err(t.lineno, "window key '" + tok[0] + "' needs one integer");
        else
          field = v;
      };
      if (tok[0] == "l_min")
        set_i64(p.window.l_min);
      else if (tok[0] == "l_max")
        set_i64(p.window.l_max);
      else if (tok[0] == "j_min")
        set_i64(p.window.j_min);
      else if (tok[0] == "j_max")
        set_i64(p.window.j_max);
      else if (tok[0] == "charge_bound")
        set_i64(p.window.charge_bound);
      else if (tok[0] == "stabilize_s") {
        int64_t v;
        if (tok.size() != 2 || !parse_i64(tok[1], v) || v < 1)
          err(t.lineno, "stabilize_s needs a positive integer");
        else
          p.window.stabilize_s = static_cast<int>(v);
      } else if (tok[0] == "truncation") {
        p.window.truncation.clear();
        for (std::size_t i = 1; i < tok.size(); ++i) {
          int64_t v;
          if (!parse_i64(tok[i], v) || v < 0) {
            err(t.lineno, "truncation schedule entries must be non-negative integers");
            break;
          }
          p.window.truncation.push_back(v);
        }
      } else {
        err(t.lineno, "unknown window key '" + tok[0] + "'");
      }
    }
  }
  if (!section.empty()) errors.push_back(origin + ": unterminated section '" + section + "'");
  if (!have_rank) errors.push_back(origin + ": missing lattice rank");
  // which data each pipeline needs
  bool needs_full = p.pipeline == "bundle" || p.pipeline == "hypersurface" ||
                    p.pipeline == "master" || p.pipeline == "character" ||
                    p.pipeline == "blocks";
  bool needs_fan = p.pipeline == "bundle" || p.pipeline == "hypersurface" ||
                   p.pipeline == "stringy";
  if (p.delta_star_points.empty()) errors.push_back(origin + ": delta_star has no points");
  if (needs_full) {
    if (p.delta_points.empty()) errors.push_back(origin + ": delta has no points");
    if (!have_deg) errors.push_back(origin + ": missing deg");
    if (!have_deg_star) errors.push_back(origin + ": missing deg_star");
  }
  if (needs_fan && !have_fan) errors.push_back(origin + ": pipeline needs a fan");

  if (errors.empty() && have_fan) {
    std::vector<Cone> cones;
    for (const auto& gens : fan_cones) cones.push_back(make_cone(Side::N, p.rank, gens));
    try {
      p.fan = make_fan(Side::N, p.rank, cones);
    } catch (const std::exception& e) {
      errors.push_back(origin + ": " + e.what());
    }
  }
  if (errors.empty()) {
    try {
      if (needs_full) {
        build_geometry(p);
      } else if (p.pipeline == "chart") {
        std::vector<std::vector<int64_t>> gens;
        for (const auto& n : p.delta_star_points) gens.push_back(n.c);
        degree_vector(make_cone(Side::N, p.rank, gens));
      } else if (p.pipeline == "stringy") {
        for (const auto* c : p.fan->maximal_cones()) {
          LatticeVector degc = degree_vector(*c);
          for (const auto& n : p.delta_star_points)
            if (cone_contains(*c, n) && pairing(degc, n) != 1)
              throw InputError("delta* point " + to_string(n) +
                               " is not at height one in its chart");
        }
      }
    } catch (const std::exception& e) {
      errors.push_back(origin + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    std::string joined;
    for (const auto& e : errors) joined += e + "\n";
    throw InputError(joined);
  }
  return p;
}

ProblemInstance parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_problem_text(os.str(), path);
}

std::string problem_to_text(const ProblemInstance& p) {
  std::ostringstream os;
  os << "lattice {\n  rank " << p.rank << "\n}\n";
  os << "delta {\n";
  for (std::size_t i = 0; i < p.delta_points.size(); ++i) {
    os << "  point";
    for (auto c : p.delta_points[i].c) os << " " << c;
    os << " " << (p.f_values[i] ? rational_to_string(*p.f_values[i]) : std::string("random"))
       << "\n";
  }
  os << "}\n";
  os << "delta_star {\n";
  for (std::size_t i = 0; i < p.delta_star_points.size(); ++i) {
    os << "  point";
    for (auto c : p.delta_star_points[i].c) os << " " << c;
    os << " " << (p.g_values[i] ? rational_to_string(*p.g_values[i]) : std::string("random"))
       << "\n";
  }
  os << "}\n";
  os << "deg";
  for (auto c : p.deg.c) os << " " << c;
  os << "\ndeg_star";
  for (auto c : p.deg_star.c) os << " " << c;
  os << "\n";
  if (p.fan) {
    os << "fan {\n";
    for (const auto& c : p.fan->cones) {
      os << "  cone";
      bool first = true;
      for (const auto& g : c.generators) {
        if (!first) os << " ;";
        first = false;
        for (auto x : g.c) os << " " << x;
      }
      os << "\n";
    }
    os << "}\n";
  }
  if (!p.heights.empty()) {
    os << "heights {\n";
    for (const auto& [g, h] : p.heights) {
      os << "  at";
      for (auto x : g.c) os << " " << x;
      os << " " << rational_to_string(h) << "\n";
    }
    os << "}\n";
  }
  os << "window {\n  l_min " << p.window.l_min << "\n  l_max " << p.window.l_max << "\n  j_min "
     << p.window.j_min << "\n  j_max " << p.window.j_max << "\n  charge_bound "
     << p.window.charge_bound << "\n  stabilize_s " << p.window.stabilize_s << "\n";
  if (!p.window.truncation.empty()) {
    os << "  truncation";
    for (auto t : p.window.truncation) os << " " << t;
    os << "\n";
  }
  os << "}\n";
  os << "pipeline " << p.pipeline << "\n";
  os << "seed " << p.seed << "\n";
  return os.str();
}

}  // namespace latvoa
