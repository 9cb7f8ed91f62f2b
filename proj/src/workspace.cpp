#include "sullivan/workspace.hpp"

#include "sullivan/errors.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace sullivan {

namespace {

[[noreturn]] void fail(int line, size_t col, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ", column " << col << ": " << what;
  throw parse_error(os.str());
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  throw parse_error(os.str());
}

bool id_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

int parse_int(const std::string& s, int line, const std::string& what) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    fail(line, what + " '" + s + "' is not an integer");
  }
  if (pos != s.size()) fail(line, what + " '" + s + "' is not an integer");
  return v;
}

// ---------------------------------------------------------------------------
// polynomial sub-grammar

struct PolyTok {
  enum Kind { Num, Star, Plus, Minus, Id } kind;
  std::string text;     // Id: generator name
  Q num;                // Num
  uint32_t exp = 1;     // Id: exponent
  size_t col = 0;       // 1-based within the poly text
};

std::vector<PolyTok> lex_poly(const std::string& s, int line) {
  std::vector<PolyTok> toks;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '*') {
      toks.push_back({PolyTok::Star, "*", Q(0), 1, col});
      ++i;
    } else if (c == '+') {
      toks.push_back({PolyTok::Plus, "+", Q(0), 1, col});
      ++i;
    } else if (c == '-') {
      toks.push_back({PolyTok::Minus, "-", Q(0), 1, col});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '/') {
        ++j;
        size_t den = j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == den) fail(line, col, "rational is missing its denominator");
      }
      std::string lit = s.substr(i, j - i);
      Q q(lit, 10);
      if (q.get_den() == 0) fail(line, col, "rational '" + lit + "' divides by zero");
      q.canonicalize();
      toks.push_back({PolyTok::Num, lit, q, 1, col});
      i = j;
    } else if (id_start(c)) {
      size_t j = i;
      while (j < s.size() && id_char(s[j])) ++j;
      PolyTok t{PolyTok::Id, s.substr(i, j - i), Q(0), 1, col};
      if (j < s.size() && s[j] == '^') {
        ++j;
        size_t e0 = j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == e0) fail(line, j, "exponent is missing its digits");
        t.exp = static_cast<uint32_t>(
            parse_int(s.substr(e0, j - e0), line, "exponent"));
      }
      toks.push_back(std::move(t));
      i = j;
    } else {
      fail(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  return toks;
}

}  // namespace

Element parse_poly(const Algebra& a, const std::string& text, int line_no) {
  std::vector<PolyTok> toks = lex_poly(text, line_no);
  if (toks.empty()) fail(line_no, "empty polynomial");
  Element acc = el_zero();
  size_t i = 0;
  bool first = true;
  while (i < toks.size()) {
    Q sign(1);
    if (first) {
      if (toks[i].kind == PolyTok::Minus) {
        sign = Q(-1);
        ++i;
      } else if (toks[i].kind == PolyTok::Plus) {
        ++i;
      }
    } else {
      if (toks[i].kind == PolyTok::Plus) {
        ++i;
      } else if (toks[i].kind == PolyTok::Minus) {
        sign = Q(-1);
        ++i;
      } else {
        fail(line_no, toks[i].col, "expected '+' or '-' between terms");
      }
    }
    if (i >= toks.size()) fail(line_no, "polynomial ends after a sign");
    Q coef(1);
    bool have_coef = false;
    if (toks[i].kind == PolyTok::Num) {
      coef = toks[i].num;
      have_coef = true;
      ++i;
      if (i < toks.size() && toks[i].kind == PolyTok::Star) {
        ++i;
        if (i >= toks.size() || toks[i].kind != PolyTok::Id)
          fail(line_no, "expected a generator after '*'");
      } else if (i < toks.size() && toks[i].kind == PolyTok::Id) {
        fail(line_no, toks[i].col, "expected '*' between coefficient and generators");
      }
    }
    Element mono = el_one();
    bool any_id = false;
    while (i < toks.size() && toks[i].kind == PolyTok::Id) {
      const PolyTok& t = toks[i];
      std::optional<size_t> g = a.find(t.text);
      if (!g) fail(line_no, t.col, "unknown generator '" + t.text + "'");
      if (a.odd(*g) && t.exp > 1)
        fail(line_no, t.col,
             "generator '" + t.text + "' is odd; exponent " + std::to_string(t.exp) +
                 " is not allowed");
      if (t.exp == 0) fail(line_no, t.col, "exponent must be at least 1");
      mono = mul(a, mono, el_pow(a, el_gen(static_cast<uint32_t>(*g)), t.exp));
      any_id = true;
      ++i;
    }
    if (!have_coef && !any_id)
      fail(line_no, toks[i < toks.size() ? i : toks.size() - 1].col, "expected a term");
    acc = add(acc, scale(Q(sign * coef), mono));
    first = false;
  }
  if (acc.truncated)
    fail(line_no, "polynomial exceeds the degree bound; raise the block's bound");
  return acc;
}

namespace {

// ---------------------------------------------------------------------------
// block parsing

struct RawLine {
  int no = 0;
  std::string text;
};

std::vector<std::string> words_of(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> w;
  std::string t;
  while (in >> t) w.push_back(t);
  return w;
}

// Shared shape of model and presentation blocks while their lines are being
// collected; polynomials can only be parsed once every generator is known.
struct BlockDraft {
  std::string name;
  int start_line = 0;
  std::vector<std::pair<std::string, int>> decl;
  std::vector<int> decl_line;
  std::vector<RawLine> d_lines;    // "d <id> = <poly>" payloads
  std::vector<RawLine> rel_lines;  // presentation only
  std::optional<int> bound;
  int bound_line = 0;
};

void take_generator(BlockDraft& b, const std::vector<std::string>& w, int line) {
  if (w.size() != 3) fail(line, "expected 'generator <id> <degree>'");
  if (!id_start(w[1][0])) fail(line, "generator name '" + w[1] + "' must start a word");
  for (const auto& [name, deg] : b.decl)
    if (name == w[1]) fail(line, "duplicate generator '" + w[1] + "'");
  int deg = parse_int(w[2], line, "degree");
  if (deg <= 0)
    fail(line, "generator '" + w[1] + "' has degree " + w[2] + "; degrees must be >= 1");
  b.decl.push_back({w[1], deg});
  b.decl_line.push_back(line);
}

void take_bound(BlockDraft& b, const std::vector<std::string>& w, int line) {
  if (w.size() != 2) fail(line, "expected 'bound <N>'");
  if (b.bound) fail(line, "duplicate bound line");
  int n = parse_int(w[1], line, "bound");
  if (n < 1) fail(line, "bound must be >= 1");
  b.bound = n;
  b.bound_line = line;
}

// "d <id> = <poly>": record the payload, keeping the raw right-hand side.
void take_d(BlockDraft& b, const std::string& line_text, int line) {
  size_t eq = line_text.find('=');
  if (eq == std::string::npos) fail(line, "expected 'd <id> = <poly>'");
  std::vector<std::string> lhs = words_of(line_text.substr(0, eq));
  if (lhs.size() != 2) fail(line, "expected 'd <id> = <poly>'");
  for (const RawLine& prev : b.d_lines) {
    std::vector<std::string> pw = words_of(prev.text.substr(0, prev.text.find('=')));
    if (pw[1] == lhs[1]) fail(line, "duplicate differential for '" + lhs[1] + "'");
  }
  b.d_lines.push_back({line, line_text});
}

Algebra build_algebra(const BlockDraft& b) {
  int bound = b.bound.value_or(16);
  int maxdeg = 1;
  for (const auto& [name, deg] : b.decl) maxdeg = std::max(maxdeg, deg);
  if (bound < maxdeg)
    fail(b.bound_line, "bound " + std::to_string(bound) +
                           " is below the top generator degree " +
                           std::to_string(maxdeg));
  return Algebra::make(b.decl, bound);
}

// Parses the recorded d-lines against the finished algebra and checks each
// value raises degree by exactly one.
std::vector<Element> build_differential(const Algebra& alg, const BlockDraft& b) {
  std::vector<Element> d(alg.size(), el_zero());
  for (const RawLine& rl : b.d_lines) {
    size_t eq = rl.text.find('=');
    std::string id = words_of(rl.text.substr(0, eq))[1];
    std::optional<size_t> g = alg.find(id);
    if (!g) fail(rl.no, "differential of unknown generator '" + id + "'");
    Element v = parse_poly(alg, rl.text.substr(eq + 1), rl.no);
    std::optional<int> deg = homogeneous_degree(alg, v);
    if (!v.is_zero() && !deg)
      fail(rl.no, "d " + id + " is not homogeneous");
    if (!v.is_zero() && *deg != alg.degree(*g) + 1)
      fail(rl.no, "d " + id + " has degree " + std::to_string(*deg) + ", expected " +
                      std::to_string(alg.degree(*g) + 1));
    d[*g] = std::move(v);
  }
  return d;
}

struct MorphismDraft {
  std::string name;
  std::string left, right;
  int start_line = 0;
  std::vector<RawLine> assign_lines;  // "<id> |-> <poly>"
};

void finish_model(Workspace& w, BlockDraft& b) {
  Algebra alg = build_algebra(b);
  std::vector<Element> d = build_differential(alg, b);
  w.models[b.name] = make_model(b.name, std::move(alg), std::move(d));
  w.model_order.push_back(b.name);
}

void finish_presentation(Workspace& w, BlockDraft& b) {
  Algebra alg = build_algebra(b);
  std::vector<Element> rel;
  for (const RawLine& rl : b.rel_lines) {
    Element r = parse_poly(alg, rl.text, rl.no);
    if (!r.is_zero() && !homogeneous_degree(alg, r))
      fail(rl.no, "relation is not homogeneous");
    rel.push_back(std::move(r));
  }
  std::vector<Element> d = build_differential(alg, b);
  bool dzero = true;
  for (const Element& e : d) dzero = dzero && e.is_zero();
  try {
    w.presentations.emplace(
        b.name, make_presented(b.name, std::move(alg), std::move(rel),
                               dzero ? std::vector<Element>{} : std::move(d)));
  } catch (const std::invalid_argument& e) {
    fail(b.start_line, std::string("invalid presentation: ") + e.what());
  }
  w.presentation_order.push_back(b.name);
}

void finish_morphism(Workspace& w, MorphismDraft& b) {
  auto li = w.models.find(b.left);
  if (li == w.models.end()) fail(b.start_line, "unknown model '" + b.left + "'");
  auto ri = w.models.find(b.right);
  if (ri == w.models.end()) fail(b.start_line, "unknown model '" + b.right + "'");
  // Space direction left -> right means the algebra map goes right -> left.
  ModelPtr src = ri->second, dst = li->second;
  Morphism f{src, dst, std::vector<Element>(src->size(), el_zero())};
  std::vector<bool> seen(src->size(), false);
  for (const RawLine& rl : b.assign_lines) {
    size_t arrow = rl.text.find("|->");
    std::vector<std::string> lhs = words_of(rl.text.substr(0, arrow));
    if (lhs.size() != 1) fail(rl.no, "expected '<id> |-> <poly>'");
    std::optional<size_t> g = src->alg.find(lhs[0]);
    if (!g)
      fail(rl.no, "'" + lhs[0] + "' is not a generator of '" + src->name + "'");
    if (seen[*g]) fail(rl.no, "duplicate assignment for '" + lhs[0] + "'");
    seen[*g] = true;
    Element v = parse_poly(dst->alg, rl.text.substr(arrow + 3), rl.no);
    std::optional<int> deg = homogeneous_degree(dst->alg, v);
    if (!v.is_zero() && !deg)
      fail(rl.no, "image of '" + lhs[0] + "' is not homogeneous");
    if (!v.is_zero() && *deg != src->alg.degree(*g))
      fail(rl.no, "image of '" + lhs[0] + "' has degree " + std::to_string(*deg) +
                      ", expected " + std::to_string(src->alg.degree(*g)));
    f.val[*g] = std::move(v);
  }
  w.morphisms.emplace(b.name, std::move(f));
  w.arrows[b.name] = {b.left, b.right};
  w.morphism_order.push_back(b.name);
}

void check_fresh_name(const Workspace& w, const std::string& name, int line) {
  if (w.models.count(name) || w.morphisms.count(name) || w.presentations.count(name))
    fail(line, "duplicate name '" + name + "'");
}

}  // namespace

Workspace parse_workspace(const std::string& text) {
  Workspace w;
  std::istringstream in(text);
  std::string raw;
  int ln = 0;

  enum class Mode { Top, Model, Morphism, Presentation };
  Mode mode = Mode::Top;
  BlockDraft block;
  MorphismDraft mblock;

  while (std::getline(in, raw)) {
    ++ln;
    size_t hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::vector<std::string> words = words_of(line);
    if (words.empty()) continue;
    const std::string& head = words[0];

    if (mode == Mode::Top) {
      if (head == "model" || head == "presentation") {
        if (words.size() != 2) fail(ln, "expected '" + head + " <name>'");
        check_fresh_name(w, words[1], ln);
        block = BlockDraft{};
        block.name = words[1];
        block.start_line = ln;
        mode = head == "model" ? Mode::Model : Mode::Presentation;
      } else if (head == "morphism") {
        if (words.size() != 6 || words[2] != ":" || words[4] != "->")
          fail(ln, "expected 'morphism <name> : <source> -> <target>'");
        check_fresh_name(w, words[1], ln);
        mblock = MorphismDraft{};
        mblock.name = words[1];
        mblock.left = words[3];
        mblock.right = words[5];
        mblock.start_line = ln;
        mode = Mode::Morphism;
      } else if (head == "end") {
        fail(ln, "'end' outside a block");
      } else {
        fail(ln, "expected 'model', 'morphism' or 'presentation', got '" + head + "'");
      }
      continue;
    }

    if (head == "end") {
      if (words.size() != 1) fail(ln, "'end' takes no arguments");
      if (mode == Mode::Model) finish_model(w, block);
      else if (mode == Mode::Presentation) finish_presentation(w, block);
      else finish_morphism(w, mblock);
      mode = Mode::Top;
      continue;
    }

    if (mode == Mode::Morphism) {
      if (line.find("|->") == std::string::npos)
        fail(ln, "expected '<id> |-> <poly>' or 'end'");
      mblock.assign_lines.push_back({ln, line});
      continue;
    }

    if (head == "generator") {
      take_generator(block, words, ln);
    } else if (head == "bound") {
      take_bound(block, words, ln);
    } else if (head == "d") {
      take_d(block, line, ln);
    } else if (head == "relation" && mode == Mode::Presentation) {
      std::string rhs = line.substr(line.find("relation") + 8);
      if (words.size() < 2) fail(ln, "expected 'relation <poly>'");
      block.rel_lines.push_back({ln, rhs});
    } else {
      fail(ln, "unexpected '" + head + "' inside a block");
    }
  }
  if (mode != Mode::Top)
    fail(ln, "unterminated block (missing 'end')");
  return w;
}

Workspace load_workspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open workspace file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workspace(buf.str());
}

namespace {

void write_generators(std::ostringstream& os, const Algebra& alg) {
  os << "  bound " << alg.bound() << "\n";
  for (size_t i : alg.declaration_order()) {
    os << "  generator " << alg.gen(i).name << " " << alg.gen(i).degree << "\n";
  }
}

void write_differential(std::ostringstream& os, const Algebra& alg,
                        const std::vector<Element>& d) {
  for (size_t i : alg.declaration_order()) {
    if (!d[i].is_zero())
      os << "  d " << alg.gen(i).name << " = " << el_str(alg, d[i]) << "\n";
  }
}

}  // namespace

std::string serialize_workspace(const Workspace& w) {
  std::ostringstream os;
  bool first = true;
  auto gap = [&]() {
    if (!first) os << "\n";
    first = false;
  };
  for (const std::string& name : w.model_order) {
    const Model& m = *w.models.at(name);
    gap();
    os << "model " << name << "\n";
    write_generators(os, m.alg);
    write_differential(os, m.alg, m.d);
    os << "end\n";
  }
  for (const std::string& name : w.presentation_order) {
    const PresentedAlgebra& p = w.presentations.at(name);
    gap();
    os << "presentation " << name << "\n";
    write_generators(os, p.alg);
    for (const Element& r : p.rel) os << "  relation " << el_str(p.alg, r) << "\n";
    write_differential(os, p.alg, p.d);
    os << "end\n";
  }
  for (const std::string& name : w.morphism_order) {
    const Morphism& f = w.morphisms.at(name);
    const Workspace::Arrow& ar = w.arrows.at(name);
    gap();
    os << "morphism " << name << " : " << ar.left << " -> " << ar.right << "\n";
    for (size_t i : f.src->alg.declaration_order()) {
      os << "  " << f.src->alg.gen(i).name << " |-> " << el_str(f.dst->alg, f.val[i])
         << "\n";
    }
    os << "end\n";
  }
  return os.str();
}

}  // namespace sullivan
