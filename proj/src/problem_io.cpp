#include "certqp/problem_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

namespace certqp {

InputError::InputError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      message_(message),
      line_(line) {}

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Reading: a SAX pass that builds the DOM and remembers, for every JSON
// pointer, the line on which its value ends.

struct LineTracker {
  int line = 1;
  int last_token_line = 1;
};

// Input iterator over the text that keeps LineTracker current as the lexer
// consumes characters. The lexer reads at most one character past a token, so
// the line of the last non-blank character is the line of the token.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, LineTracker* t) : p_(p), tracker_(t) {}

  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    const char c = *p_;
    if (c == '\n') {
      ++tracker_->line;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      tracker_->last_token_line = tracker_->line;
    }
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_ = nullptr;
  LineTracker* tracker_ = nullptr;
};

std::string escape_pointer_token(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class LocatingSax {
 public:
  LocatingSax(json& root, const LineTracker& tracker) : dom_(root, true), tracker_(tracker) {}

  bool null() { return scalar([&] { return dom_.null(); }); }
  bool boolean(bool v) { return scalar([&] { return dom_.boolean(v); }); }
  bool number_integer(json::number_integer_t v) {
    return scalar([&] { return dom_.number_integer(v); });
  }
  bool number_unsigned(json::number_unsigned_t v) {
    return scalar([&] { return dom_.number_unsigned(v); });
  }
  bool number_float(json::number_float_t v, const std::string& s) {
    return scalar([&] { return dom_.number_float(v, s); });
  }
  bool string(std::string& v) { return scalar([&] { return dom_.string(v); }); }
  bool binary(json::binary_t& v) { return scalar([&] { return dom_.binary(v); }); }

  bool start_object(std::size_t n) {
    open(false);
    return dom_.start_object(n);
  }
  bool key(std::string& k) {
    frames_.back().key = k;
    return dom_.key(k);
  }
  bool end_object() {
    close();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    open(true);
    return dom_.start_array(n);
  }
  bool end_array() {
    close();
    return dom_.end_array();
  }

  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
    std::string what = ex.what();
    const auto pos = what.find("] ");
    if (pos != std::string::npos) what = what.substr(pos + 2);
    throw InputError("malformed JSON: " + what, tracker_.line);
  }

  std::map<std::string, int> take_lines() { return std::move(lines_); }

 private:
  struct Frame {
    bool is_array;
    std::string base;
    std::string key;
    std::size_t index = 0;
  };

  std::string current_pointer() const {
    if (frames_.empty()) return "";
    const Frame& f = frames_.back();
    return f.base + "/" + (f.is_array ? std::to_string(f.index) : escape_pointer_token(f.key));
  }

  template <class F>
  bool scalar(F&& f) {
    lines_[current_pointer()] = tracker_.last_token_line;
    advance();
    return f();
  }

  void open(bool is_array) {
    std::string ptr = current_pointer();
    lines_[ptr] = tracker_.last_token_line;
    frames_.push_back(Frame{is_array, std::move(ptr), {}, 0});
  }

  void close() {
    frames_.pop_back();
    advance();
  }

  void advance() {
    if (!frames_.empty() && frames_.back().is_array) ++frames_.back().index;
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  const LineTracker& tracker_;
  std::vector<Frame> frames_;
  std::map<std::string, int> lines_;
};

struct Document {
  json root;
  std::map<std::string, int> lines;

  int line_of(std::string ptr) const {
    while (true) {
      if (auto it = lines.find(ptr); it != lines.end()) return it->second;
      if (ptr.empty()) return 0;
      ptr.erase(ptr.rfind('/'));
    }
  }

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw InputError(msg, line_of(ptr));
  }
};

Document load(std::string_view text) {
  Document doc;
  LineTracker tracker;
  LocatingSax sax(doc.root, tracker);
  CountingIterator first(text.data(), &tracker);
  CountingIterator last(text.data() + text.size(), &tracker);
  json::sax_parse(first, last, &sax);
  doc.lines = sax.take_lines();
  return doc;
}

// A value inside a Document, addressed by its JSON pointer.
struct Node {
  const Document& doc;
  const json& value;
  std::string ptr;

  [[noreturn]] void fail(const std::string& msg) const { doc.fail(ptr, msg); }

  std::string where() const { return ptr.empty() ? "document" : "\"" + ptr + "\""; }

  void require_object() const {
    if (!value.is_object()) fail(where() + " must be an object");
  }
  void require_array() const {
    if (!value.is_array()) fail(where() + " must be an array");
  }

  bool has(const std::string& key) const { return value.contains(key); }

  Node member(const std::string& key) const {
    require_object();
    auto it = value.find(key);
    if (it == value.end()) fail("missing member \"" + key + "\" in " + where());
    return {doc, *it, ptr + "/" + escape_pointer_token(key)};
  }

  Node at(std::size_t i) const { return {doc, value[i], ptr + "/" + std::to_string(i)}; }

  void allow_only(std::initializer_list<const char*> keys) const {
    require_object();
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (!allowed.count(it.key())) {
        Node{doc, it.value(), ptr + "/" + escape_pointer_token(it.key())}.fail(
            "unknown member \"" + it.key() + "\" in " + where());
      }
    }
  }

  std::string as_string() const {
    if (!value.is_string()) fail(where() + " must be a string");
    return value.get<std::string>();
  }

  Index as_count() const {
    if (value.is_number_unsigned()) return static_cast<Index>(value.get<std::uint64_t>());
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
      return static_cast<Index>(value.get<std::int64_t>());
    }
    fail(where() + " must be a non-negative integer");
  }

  std::uint64_t as_u64() const {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(value.get<std::int64_t>());
    }
    fail(where() + " must be a non-negative integer");
  }

  bool as_bool() const {
    if (!value.is_boolean()) fail(where() + " must be true or false");
    return value.get<bool>();
  }

  double as_number() const {
    if (value.is_string()) {
      const std::string s = value.get<std::string>();
      if (is_nan_text(s)) fail("NaN is not allowed (" + where() + ")");
      fail(where() + " must be a finite number");
    }
    if (!value.is_number()) fail(where() + " must be a number");
    const double d = value.get<double>();
    if (std::isnan(d)) fail("NaN is not allowed (" + where() + ")");
    if (!std::isfinite(d)) fail(where() + " must be a finite number");
    return d;
  }

  // Box bound: a finite number or one of the strings "inf", "-inf".
  double as_bound() const {
    if (value.is_string()) {
      const std::string s = value.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
      if (is_nan_text(s)) fail("NaN is not allowed (" + where() + ")");
      fail(where() + " must be a number, \"inf\" or \"-inf\"");
    }
    return as_number();
  }

  Vector as_vector(std::optional<Index> len = std::nullopt, bool bounds = false) const {
    require_array();
    if (len && static_cast<Index>(value.size()) != *len) {
      fail(where() + " must have " + std::to_string(*len) + " entries, found " +
           std::to_string(value.size()));
    }
    Vector v(static_cast<Index>(value.size()));
    for (std::size_t i = 0; i < value.size(); ++i) {
      v(static_cast<Index>(i)) = bounds ? at(i).as_bound() : at(i).as_number();
    }
    return v;
  }

  static bool is_nan_text(const std::string& s) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return t == "nan" || t == "+nan" || t == "-nan";
  }
};

DenseMatrix parse_triplets(const Node& node, Index rows, Index cols, bool upper) {
  node.require_array();
  DenseMatrix out = DenseMatrix::Zero(rows, cols);
  std::set<std::pair<Index, Index>> seen;
  for (std::size_t k = 0; k < node.value.size(); ++k) {
    const Node t = node.at(k);
    t.require_array();
    if (t.value.size() != 3) t.fail(t.where() + " must be a [row, col, value] triplet");
    const Index i = t.at(0).as_count();
    const Index j = t.at(1).as_count();
    const double v = t.at(2).as_number();
    if (i >= rows || j >= cols) {
      t.fail("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside a " +
             std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    if (upper && i > j) t.fail("Q entries must lie in the upper triangle (row <= col)");
    if (!seen.insert({i, j}).second) {
      t.fail("duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    out(i, j) = v;
    if (upper) out(j, i) = v;
  }
  return out;
}

Cone parse_cone(const Node& node) {
  node.allow_only({"type", "dim"});
  const std::string type = node.member("type").as_string();
  const Index d = node.member("dim").as_count();
  if (type == "nonneg") return NonnegativeOrthant{d};
  if (type == "zero") return ZeroCone{d};
  if (type == "soc") return SecondOrderCone{d};
  node.member("type").fail("unknown cone type \"" + type + "\" (expected nonneg, zero or soc)");
}

ConvexSet parse_set(const Node& node) {
  node.require_object();
  const Node type_node = node.member("type");
  const std::string type = type_node.as_string();
  try {
    if (type == "box") {
      node.allow_only({"type", "l", "u"});
      const Vector l = node.member("l").as_vector(std::nullopt, true);
      const Vector u = node.member("u").as_vector(static_cast<Index>(l.size()), true);
      return ConvexSet::box(l, u);
    }
    if (type == "nonneg") {
      node.allow_only({"type", "dim"});
      return ConvexSet::nonnegative_orthant(node.member("dim").as_count());
    }
    if (type == "zero") {
      node.allow_only({"type", "dim"});
      return ConvexSet::zero(node.member("dim").as_count());
    }
    if (type == "point") {
      node.allow_only({"type", "value"});
      return ConvexSet::singleton(node.member("value").as_vector());
    }
    if (type == "halfspace") {
      node.allow_only({"type", "normal", "offset"});
      return ConvexSet::halfspace(node.member("normal").as_vector(),
                                  node.member("offset").as_number());
    }
    if (type == "ball") {
      node.allow_only({"type", "center", "radius"});
      return ConvexSet::ball(node.member("center").as_vector(), node.member("radius").as_number());
    }
    if (type == "soc") {
      node.allow_only({"type", "dim"});
      return ConvexSet::second_order_cone(node.member("dim").as_count());
    }
    if (type == "translated_cone") {
      node.allow_only({"type", "offset", "cone"});
      return ConvexSet::translated_cone(node.member("offset").as_vector(),
                                        parse_cone(node.member("cone")));
    }
    if (type == "cartesian") {
      node.allow_only({"type", "parts"});
      const Node parts = node.member("parts");
      parts.require_array();
      std::vector<ConvexSet> sets;
      for (std::size_t i = 0; i < parts.value.size(); ++i) sets.push_back(parse_set(parts.at(i)));
      return ConvexSet::cartesian(std::move(sets));
    }
  } catch (const std::invalid_argument& e) {
    node.fail(std::string("invalid ") + type + " set: " + e.what());
  }
  type_node.fail("unknown set type \"" + type + "\"");
}

TruthSidecar parse_truth(const Node& node, Index n, Index m) {
  node.allow_only({"kind", "x", "z", "y", "vector", "seed", "family", "set_family",
                   "unique_certificate"});
  const Node kind_node = node.member("kind");
  const std::string kind = kind_node.as_string();
  TruthSidecar out{KktTruth{}, {}, {}, {}, {}};
  if (kind == "kkt") {
    if (node.has("vector")) node.member("vector").fail("member \"vector\" needs a certificate kind");
    out.truth = KktTruth{node.member("x").as_vector(n), node.member("z").as_vector(m),
                         node.member("y").as_vector(m)};
  } else {
    CertificateKind ck;
    try {
      ck = certificate_kind_from_string(kind);
    } catch (const std::invalid_argument&) {
      kind_node.fail("unknown truth kind \"" + kind +
                     "\" (expected kkt, primal_infeasibility or dual_infeasibility)");
    }
    for (const char* k : {"x", "z", "y"}) {
      if (node.has(k)) node.member(k).fail(std::string("member \"") + k + "\" needs kind kkt");
    }
    const Index len = ck == CertificateKind::primal_infeasibility ? m : n;
    out.truth = CertificateTruth{ck, node.member("vector").as_vector(len)};
  }
  if (node.has("seed")) out.seed = node.member("seed").as_u64();
  try {
    if (node.has("family")) {
      out.family = instance_family_from_string(node.member("family").as_string());
    }
    if (node.has("set_family")) {
      out.set_family = set_family_from_string(node.member("set_family").as_string());
    }
  } catch (const std::invalid_argument& e) {
    node.fail(e.what());
  }
  if (node.has("unique_certificate")) {
    out.unique_certificate = node.member("unique_certificate").as_bool();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Writing.

// Objects open one member per line, arrays of containers one element per
// line, flat arrays stay on one line.
void pretty(std::string& out, const ojson& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (v.is_object() && !v.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (auto it = v.begin(); it != v.end(); ++it, ++k) {
      out += inner + ojson(it.key()).dump() + ": ";
      pretty(out, it.value(), indent + 2);
      out += k + 1 < v.size() ? ",\n" : "\n";
    }
    out += pad + "}";
    return;
  }
  if (v.is_array() && !v.empty() && v.front().is_structured()) {
    out += "[\n";
    for (std::size_t k = 0; k < v.size(); ++k) {
      out += inner;
      pretty(out, v[k], indent + 2);
      out += k + 1 < v.size() ? ",\n" : "\n";
    }
    out += pad + "]";
    return;
  }
  out += v.dump();
}

std::string to_text(const ojson& v) {
  std::string out;
  pretty(out, v, 0);
  out += "\n";
  return out;
}

ojson number(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  return d;
}

ojson vector_json(const Vector& v) {
  ojson a = ojson::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

ojson triplets(const DenseMatrix& m, bool upper) {
  ojson a = ojson::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = upper ? i : 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) a.push_back(ojson::array({i, j, m(i, j)}));
    }
  }
  return a;
}

ojson cone_json(const Cone& c) {
  return std::visit(
      [](const auto& k) -> ojson {
        using K = std::decay_t<decltype(k)>;
        const char* type = std::is_same_v<K, NonnegativeOrthant> ? "nonneg"
                           : std::is_same_v<K, ZeroCone>         ? "zero"
                                                                 : "soc";
        ojson o;
        o["type"] = type;
        o["dim"] = k.dim;
        return o;
      },
      c);
}

ojson set_json(const ConvexSet& set) {
  ojson o;
  o["type"] = std::string(kind_name(set));
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Box>) {
          o["l"] = vector_json(k.lower);
          o["u"] = vector_json(k.upper);
        } else if constexpr (std::is_same_v<K, NonnegativeOrthant> || std::is_same_v<K, ZeroCone> ||
                             std::is_same_v<K, SecondOrderCone>) {
          o["dim"] = k.dim;
        } else if constexpr (std::is_same_v<K, Singleton>) {
          o["value"] = vector_json(k.point);
        } else if constexpr (std::is_same_v<K, Halfspace>) {
          o["normal"] = vector_json(k.normal);
          o["offset"] = k.offset;
        } else if constexpr (std::is_same_v<K, Ball>) {
          o["center"] = vector_json(k.center);
          o["radius"] = k.radius;
        } else if constexpr (std::is_same_v<K, TranslatedCone>) {
          o["offset"] = vector_json(k.offset);
          o["cone"] = cone_json(k.cone);
        } else {
          ojson parts = ojson::array();
          for (const auto& p : k.parts) parts.push_back(set_json(p));
          o["parts"] = std::move(parts);
        }
      },
      set.kind());
  return o;
}

ojson truth_json(const TruthSidecar& t) {
  ojson o;
  if (const auto* kkt = std::get_if<KktTruth>(&t.truth)) {
    o["kind"] = "kkt";
    o["x"] = vector_json(kkt->x);
    o["z"] = vector_json(kkt->z);
    o["y"] = vector_json(kkt->y);
  } else {
    const auto& c = std::get<CertificateTruth>(t.truth);
    o["kind"] = std::string(to_string(c.kind));
    o["vector"] = vector_json(c.vector);
  }
  if (t.seed) o["seed"] = *t.seed;
  if (t.family) o["family"] = std::string(to_string(*t.family));
  if (t.set_family) o["set_family"] = std::string(to_string(*t.set_family));
  if (t.unique_certificate) o["unique_certificate"] = *t.unique_certificate;
  return o;
}

ojson certificate_json(const Certificate& c) {
  ojson o;
  o["kind"] = std::string(to_string(c.kind));
  o["vector"] = vector_json(c.vector);
  ojson m;
  if (const auto* p = std::get_if<PrimalCertificateMetrics>(&c.metrics)) {
    m["adjoint_norm"] = number(p->adjoint_norm);
    m["support"] = number(p->support);
  } else {
    const auto& d = std::get<DualCertificateMetrics>(c.metrics);
    m["quadratic_norm"] = number(d.quadratic_norm);
    m["recession_distance"] = number(d.recession_distance);
    m["linear_term"] = number(d.linear_term);
  }
  o["metrics"] = std::move(m);
  return o;
}

std::string csv_number(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  const Document doc = load(text);
  const Node root{doc, doc.root, ""};
  root.require_object();
  root.allow_only({"n", "m", "Q", "q", "A", "set", "truth"});
  const Index n = root.member("n").as_count();
  const Index m = root.member("m").as_count();
  if (n < 1) root.member("n").fail("\"n\" must be at least 1");
  const DenseMatrix Q = parse_triplets(root.member("Q"), n, n, true);
  const Vector q = root.member("q").as_vector(n);
  const DenseMatrix A = parse_triplets(root.member("A"), m, n, false);
  const Node set_node = root.member("set");
  ConvexSet C = parse_set(set_node);
  if (C.dim() != m) {
    set_node.fail("set has dimension " + std::to_string(C.dim()) + " but m = " + std::to_string(m));
  }
  std::optional<TruthSidecar> truth;
  if (root.has("truth")) truth = parse_truth(root.member("truth"), n, m);
  try {
    return ProblemFile{ProblemData(Q, q, A, std::move(C)), std::move(truth)};
  } catch (const std::exception& e) {
    root.member("Q").fail(e.what());
  }
}

std::string serialize_problem(const ProblemData& problem, const std::optional<TruthSidecar>& truth) {
  ojson o;
  o["n"] = problem.n();
  o["m"] = problem.m();
  o["Q"] = triplets(problem.Q(), true);
  o["q"] = vector_json(problem.q());
  o["A"] = triplets(problem.A(), false);
  o["set"] = set_json(problem.C());
  if (truth) o["truth"] = truth_json(*truth);
  return to_text(o);
}

std::string serialize_bundle(const InstanceBundle& bundle) {
  TruthSidecar t{bundle.truth, bundle.seed, bundle.family, bundle.set_family, {}};
  if (std::holds_alternative<CertificateTruth>(bundle.truth)) {
    t.unique_certificate = bundle.unique_certificate;
  }
  return serialize_problem(bundle.problem, t);
}

Candidate parse_candidate(std::string_view text) {
  const Document doc = load(text);
  const Node root{doc, doc.root, ""};
  root.require_object();
  if (!root.has("certificate") && root.has("status")) {
    root.member("status").fail("outcome file carries no certificate");
  }
  const Node node = root.has("certificate") ? root.member("certificate") : root;
  const Node kind_node = node.member("kind");
  CertificateKind kind;
  try {
    kind = certificate_kind_from_string(kind_node.as_string());
  } catch (const std::invalid_argument& e) {
    kind_node.fail(e.what());
  }
  return Candidate{kind, node.member("vector").as_vector()};
}

WarmStart parse_warm_start(std::string_view text) {
  const Document doc = load(text);
  const Node root{doc, doc.root, ""};
  root.require_object();
  WarmStart w;
  w.x = root.member("x").as_vector();
  if (root.has("v")) w.v = root.member("v").as_vector();
  if (root.has("z")) w.z = root.member("z").as_vector();
  if (root.has("y")) w.y = root.member("y").as_vector();
  return w;
}

std::string serialize_outcome(const SolveOutcome& outcome, const ConfigEcho& config) {
  ojson o;
  o["status"] = std::string(to_string(outcome.status));
  o["iterations"] = outcome.iterations;
  if (outcome.certificate) {
    o["certificate"] = certificate_json(*outcome.certificate);
  } else {
    o["x"] = vector_json(outcome.x);
    o["z"] = vector_json(outcome.z);
    o["y"] = vector_json(outcome.y);
  }
  if (outcome.secondary_certificate) {
    o["secondary_certificate"] = certificate_json(*outcome.secondary_certificate);
  }
  o["residuals"] = {{"primal", number(outcome.residuals.primal)},
                    {"dual", number(outcome.residuals.dual)}};
  ojson c;
  c["solver"] = config.solver;
  if (config.solver == "dr") {
    c["alpha"] = config.alpha;
  } else {
    c["gamma"] = config.gamma;
    c["inner_method"] = std::string(to_string(config.inner_method));
  }
  c["eps_abs"] = config.tol.eps_abs;
  c["eps_rel"] = config.tol.eps_rel;
  c["eps_pinf"] = config.tol.eps_pinf;
  c["eps_dinf"] = config.tol.eps_dinf;
  c["max_iter"] = config.tol.max_iter;
  c["check_interval"] = config.tol.check_interval;
  o["config_echo"] = std::move(c);
  return to_text(o);
}

std::string serialize_trace(const std::vector<TraceRecord>& trace, bool with_inner) {
  std::string out =
      "iter,primal_res,dual_res,norm_dx,norm_dy,norm_At_dy,support_dy,norm_Q_dx,q_dot_dx,dist_rec";
  out += with_inner ? ",inner_iters\n" : "\n";
  for (const TraceRecord& r : trace) {
    out += std::to_string(r.iter);
    for (double d : {r.primal_res, r.dual_res, r.norm_dx, r.norm_dy, r.norm_At_dy, r.support_dy,
                     r.norm_Q_dx, r.q_dot_dx, r.dist_rec}) {
      out += ',';
      out += csv_number(d);
    }
    if (with_inner) out += "," + std::to_string(r.inner_iters);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace certqp
