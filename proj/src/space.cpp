#include "sandwich/space.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sandwich/errors.hpp"

namespace sandwich {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_small_int(std::string_view text, const char* what) {
  ExtRational v = ExtRational::parse(text);
  if (!v.is_integer()) {
    throw Error(ErrorCode::Parse, std::string(what) + " must be an integer, got '" +
                                      std::string(text) + "'");
  }
  return static_cast<int>(v.value());
}

const ExtRational kOne(1);
const ExtRational kZero(0);

void require(bool ok, const char* invariant, const std::string& detail) {
  if (!ok) throw ValidationError(invariant, detail);
}

bool in_closed_one_inf(const ExtRational& p) { return p >= kOne; }
bool in_one_inf_open(const ExtRational& p) { return p >= kOne && p.is_finite(); }

void enumerate_below(const MultiIndex& top, std::size_t axis, MultiIndex& cur,
                     std::set<MultiIndex>& out) {
  if (axis == top.size()) {
    out.insert(cur);
    return;
  }
  for (int k = 0; k <= top[axis]; ++k) {
    cur[axis] = k;
    enumerate_below(top, axis + 1, cur, out);
  }
}

}  // namespace

// ---------------------------------------------------------------- domains

DomainSpec DomainSpec::cube(int d, Rational side) {
  return DomainSpec{DomainKind::UnitCube, d, std::move(side), {}};
}
DomainSpec DomainSpec::ball(int d, Rational radius) {
  return DomainSpec{DomainKind::EuclideanBall, d, std::move(radius), {}};
}
DomainSpec DomainSpec::space(int d) {
  return DomainSpec{DomainKind::EuclideanSpace, d, 1, {}};
}
DomainSpec DomainSpec::finite(std::vector<std::vector<Rational>> table) {
  return DomainSpec{DomainKind::FiniteMetricSet, 0, 1, std::move(table)};
}
DomainSpec DomainSpec::sequence() {
  return DomainSpec{DomainKind::SequenceIndex, 0, 1, {}};
}

bool DomainSpec::bounded() const {
  return kind == DomainKind::UnitCube || kind == DomainKind::EuclideanBall ||
         kind == DomainKind::FiniteMetricSet;
}

bool DomainSpec::euclidean() const {
  return kind == DomainKind::UnitCube || kind == DomainKind::EuclideanBall ||
         kind == DomainKind::EuclideanSpace;
}

bool DomainSpec::connected() const { return euclidean(); }

std::string DomainSpec::str() const {
  std::ostringstream os;
  switch (kind) {
    case DomainKind::UnitCube:
      os << "cube:" << dimension;
      if (extent != 1) os << ":" << extent.str();
      break;
    case DomainKind::EuclideanBall:
      os << "ball:" << dimension;
      if (extent != 1) os << ":" << extent.str();
      break;
    case DomainKind::EuclideanSpace:
      os << "rd:" << dimension;
      break;
    case DomainKind::SequenceIndex:
      os << "seq";
      break;
    case DomainKind::FiniteMetricSet: {
      os << "metric:";
      for (std::size_t i = 0; i < metric.size(); ++i) {
        if (i) os << ';';
        for (std::size_t j = 0; j < metric[i].size(); ++j) {
          if (j) os << ',';
          os << metric[i][j].str();
        }
      }
      break;
    }
  }
  return os.str();
}

void validate_domain(const DomainSpec& domain) {
  switch (domain.kind) {
    case DomainKind::UnitCube:
    case DomainKind::EuclideanBall:
      require(domain.extent > 0, "domain.extent-positive", "extent must be positive");
      [[fallthrough]];
    case DomainKind::EuclideanSpace:
      require(domain.dimension >= 1, "domain.dimension-positive",
              "dimension must be a positive integer");
      require(domain.metric.empty(), "domain.metric-only-finite",
              "a metric table is only allowed for finite metric sets");
      break;
    case DomainKind::SequenceIndex:
      require(domain.metric.empty(), "domain.metric-only-finite",
              "a metric table is only allowed for finite metric sets");
      break;
    case DomainKind::FiniteMetricSet: {
      const auto& m = domain.metric;
      require(!m.empty(), "domain.metric-nonempty", "metric table is empty");
      const std::size_t n = m.size();
      for (const auto& row : m) {
        require(row.size() == n, "domain.metric-square", "metric table must be square");
      }
      for (std::size_t i = 0; i < n; ++i) {
        require(m[i][i] == 0, "domain.metric-diagonal", "metric table diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
          require(m[i][j] == m[j][i], "domain.metric-symmetry", "metric table must be symmetric");
          if (i != j) {
            require(m[i][j] > 0, "domain.metric-positive",
                    "distinct points must have positive distance");
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            require(m[i][k] <= m[i][j] + m[j][k], "domain.metric-triangle",
                    "triangle inequality violated at (" + std::to_string(i) + "," +
                        std::to_string(j) + "," + std::to_string(k) + ")");
      break;
    }
  }
}

// ---------------------------------------------------------- coherent sets

int order(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

CoherentSet::CoherentSet(int dimension, std::set<MultiIndex> elements)
    : dimension_(dimension), elements_(std::move(elements)) {}

CoherentSet CoherentSet::closure(const std::set<MultiIndex>& generators, int dimension) {
  if (generators.empty()) {
    throw Error(ErrorCode::EmptyInput, "coherent closure of an empty set");
  }
  std::set<MultiIndex> out;
  for (const auto& g : generators) {
    if (static_cast<int>(g.size()) != dimension) {
      throw Error(ErrorCode::ParameterRange, "multi-index has wrong dimension");
    }
    if (std::any_of(g.begin(), g.end(), [](int v) { return v < 0; })) {
      throw Error(ErrorCode::ParameterRange, "multi-index entries must be non-negative");
    }
    MultiIndex cur(g.size(), 0);
    enumerate_below(g, 0, cur, out);
  }
  return CoherentSet(dimension, std::move(out));
}

CoherentSet CoherentSet::total_order(int dimension, int s) {
  std::set<MultiIndex> gens;
  MultiIndex top(dimension, s);
  std::set<MultiIndex> box;
  MultiIndex cur(dimension, 0);
  enumerate_below(top, 0, cur, box);
  for (const auto& a : box)
    if (sandwich::order(a) <= s) gens.insert(a);
  return CoherentSet(dimension, std::move(gens));
}

CoherentSet CoherentSet::box(int dimension, int s) {
  return closure({MultiIndex(dimension, s)}, dimension);
}

bool CoherentSet::is_coherent() const {
  if (elements_.empty()) return false;
  for (const auto& a : elements_) {
    if (static_cast<int>(a.size()) != dimension_) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < 0) return false;
      if (a[i] > 0) {
        MultiIndex b = a;
        --b[i];
        if (!contains(b)) return false;
      }
    }
  }
  return true;
}

int CoherentSet::order() const {
  int best = 0;
  for (const auto& a : elements_) best = std::max(best, sandwich::order(a));
  return best;
}

std::string CoherentSet::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& a : elements_) {
    if (!first) os << ';';
    first = false;
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  }
  return os.str();
}

CoherentSet coherent_closure(const std::set<MultiIndex>& generators, int dimension) {
  return CoherentSet::closure(generators, dimension);
}

// ---------------------------------------------------------------- spaces

bool SpaceSpec::is_hilbert_witness() const {
  const ExtRational two(2);
  if (auto* s = std::get_if<family::Sobolev>(&family)) return s->p == two;
  if (auto* s = std::get_if<family::SequenceLp>(&family)) return s->p == two;
  if (auto* s = std::get_if<family::LebesgueLp>(&family)) return s->p == two;
  return false;
}

std::string family_name(const Family& f) {
  struct V {
    std::string operator()(const family::Holder&) const { return "holder"; }
    std::string operator()(const family::Sobolev&) const { return "sobolev"; }
    std::string operator()(const family::Slobodeckij&) const { return "slobodeckij"; }
    std::string operator()(const family::Besov&) const { return "besov"; }
    std::string operator()(const family::TriebelLizorkin&) const { return "triebel"; }
    std::string operator()(const family::MixedSobolev&) const { return "mixed"; }
    std::string operator()(const family::SequenceLp&) const { return "lp"; }
    std::string operator()(const family::LebesgueLp&) const { return "lebesgue"; }
    std::string operator()(const family::SupSpace&) const { return "sup"; }
    std::string operator()(const family::ContinuousBounded&) const { return "cb"; }
    std::string operator()(const family::Smooth&) const { return "smooth"; }
  };
  return std::visit(V{}, f);
}

std::string SpaceSpec::family_str() const {
  struct V {
    std::string operator()(const family::Holder& h) const { return "holder:" + h.alpha.str(); }
    std::string operator()(const family::Sobolev& h) const {
      return "sobolev:" + h.s.str() + ":" + h.p.str();
    }
    std::string operator()(const family::Slobodeckij& h) const {
      return "slobodeckij:" + h.s.str() + ":" + h.p.str();
    }
    std::string operator()(const family::Besov& h) const {
      return "besov:" + h.s.str() + ":" + h.p.str() + ":" + h.q.str();
    }
    std::string operator()(const family::TriebelLizorkin& h) const {
      return "triebel:" + h.s.str() + ":" + h.p.str() + ":" + h.q.str();
    }
    std::string operator()(const family::MixedSobolev& h) const {
      return "mixed:" + h.p.str() + ":" + h.A.str();
    }
    std::string operator()(const family::SequenceLp& h) const { return "lp:" + h.p.str(); }
    std::string operator()(const family::LebesgueLp& h) const { return "lebesgue:" + h.p.str(); }
    std::string operator()(const family::SupSpace&) const { return "sup"; }
    std::string operator()(const family::ContinuousBounded&) const { return "cb"; }
    std::string operator()(const family::Smooth&) const { return "smooth"; }
  };
  return std::visit(V{}, family);
}

std::string SpaceSpec::str() const { return family_str() + "@" + domain.str(); }

const SpaceSpec& validate_space(const SpaceSpec& spec) {
  validate_domain(spec.domain);
  const auto& dom = spec.domain;
  const bool seq = dom.kind == DomainKind::SequenceIndex;
  const bool eucl = dom.euclidean();

  struct V {
    const DomainSpec& dom;
    bool seq, eucl;

    void smoothness(const ExtRational& s, const char* inv) const {
      require(s.is_finite() && s >= kZero, inv, "smoothness must be a finite value >= 0, got " + s.str());
    }
    void euclidean_only(const char* inv) const {
      require(eucl, inv, "family requires a Euclidean domain (cube, ball or rd)");
    }

    void operator()(const family::Holder& h) const {
      require(h.alpha.is_finite() && h.alpha > kZero && h.alpha <= kOne,
              "holder.alpha-range", "alpha must lie in (0,1], got " + h.alpha.str());
      require(!seq, "holder.domain", "Hölder spaces need a metric domain");
    }
    void operator()(const family::Sobolev& h) const {
      smoothness(h.s, "sobolev.s-range");
      require(in_closed_one_inf(h.p), "sobolev.p-range", "p must lie in [1,inf], got " + h.p.str());
      euclidean_only("sobolev.domain");
    }
    void operator()(const family::Slobodeckij& h) const {
      smoothness(h.s, "slobodeckij.s-range");
      require(in_one_inf_open(h.p), "slobodeckij.p-range", "p must lie in [1,inf), got " + h.p.str());
      require(!h.s.is_integer() || h.p > kOne, "slobodeckij.integer-s-needs-p-gt-1",
              "integer smoothness requires p > 1");
      euclidean_only("slobodeckij.domain");
    }
    void operator()(const family::Besov& h) const {
      smoothness(h.s, "besov.s-range");
      require(in_closed_one_inf(h.p), "besov.p-range", "p must lie in [1,inf], got " + h.p.str());
      require(in_closed_one_inf(h.q), "besov.q-range", "q must lie in [1,inf], got " + h.q.str());
      euclidean_only("besov.domain");
    }
    void operator()(const family::TriebelLizorkin& h) const {
      smoothness(h.s, "triebel.s-range");
      require(in_one_inf_open(h.p), "triebel.p-range",
              "integration index p must lie in [1,inf), got " + h.p.str());
      require(in_closed_one_inf(h.q), "triebel.q-range", "q must lie in [1,inf], got " + h.q.str());
      euclidean_only("triebel.domain");
    }
    void operator()(const family::MixedSobolev& h) const {
      euclidean_only("mixed.domain");
      require(h.A.dimension() == dom.dimension, "mixed.dimension",
              "multi-indices must have the domain dimension");
      require(h.A.is_coherent(), "mixed.coherence", "multi-index set must be coherent");
      require(in_one_inf_open(h.p), "mixed.p-range", "p must lie in [1,inf), got " + h.p.str());
    }
    void operator()(const family::SequenceLp& h) const {
      require(in_closed_one_inf(h.p), "lp.p-range", "p must lie in [1,inf], got " + h.p.str());
      require(seq, "lp.domain", "sequence spaces live on the sequence index domain");
    }
    void operator()(const family::LebesgueLp& h) const {
      require(in_closed_one_inf(h.p), "lebesgue.p-range", "p must lie in [1,inf], got " + h.p.str());
      euclidean_only("lebesgue.domain");
    }
    void operator()(const family::SupSpace&) const {}
    void operator()(const family::ContinuousBounded&) const {
      require(!seq, "cb.domain", "continuous functions need a metric domain");
    }
    void operator()(const family::Smooth&) const { euclidean_only("smooth.domain"); }
  };
  std::visit(V{dom, seq, eucl}, spec.family);
  return spec;
}

SpaceSpec make_space(Family f, DomainSpec d) { return SpaceSpec{std::move(f), std::move(d)}; }

// ---------------------------------------------------------------- parsing

Family parse_family(std::string_view text, int dimension_hint) {
  auto parts = split(text, ':');
  const std::string name(parts[0]);
  auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      throw Error(ErrorCode::Parse, "family '" + name + "' expects " + std::to_string(n) +
                                        " parameter(s) in '" + std::string(text) + "'");
    }
  };
  auto num = [&](std::size_t i) { return ExtRational::parse(parts[i]); };

  if (name == "holder" || name == "hoelder") {
    arity(1);
    return family::Holder{num(1)};
  }
  if (name == "sobolev" || name == "H" || name == "bessel") {
    arity(2);
    return family::Sobolev{num(1), num(2)};
  }
  if (name == "slobodeckij" || name == "slobo" || name == "W") {
    arity(2);
    return family::Slobodeckij{num(1), num(2)};
  }
  if (name == "besov" || name == "B") {
    arity(3);
    return family::Besov{num(1), num(2), num(3)};
  }
  if (name == "triebel" || name == "tl" || name == "F") {
    arity(3);
    return family::TriebelLizorkin{num(1), num(2), num(3)};
  }
  if (name == "mixed-total" || name == "mixed-box") {
    arity(2);
    if (dimension_hint < 1) throw Error(ErrorCode::Parse, name + " needs a Euclidean domain");
    int s = parse_small_int(parts[1], "mixed smoothness");
    CoherentSet A = name == "mixed-total" ? CoherentSet::total_order(dimension_hint, s)
                                          : CoherentSet::box(dimension_hint, s);
    return family::MixedSobolev{std::move(A), num(2)};
  }
  if (name == "mixed") {
    // mixed:p:a,b;c,d  (the listed multi-indices, taken as given)
    arity(2);
    std::set<MultiIndex> elems;
    int dim = -1;
    for (auto item : split(parts[2], ';')) {
      MultiIndex a;
      for (auto v : split(item, ',')) a.push_back(parse_small_int(v, "multi-index entry"));
      if (dim >= 0 && static_cast<int>(a.size()) != dim) {
        throw Error(ErrorCode::Parse, "multi-indices of differing length");
      }
      dim = static_cast<int>(a.size());
      elems.insert(std::move(a));
    }
    return family::MixedSobolev{CoherentSet(dim, std::move(elems)), num(1)};
  }
  if (name == "lp" || name == "seq" || name == "l") {
    arity(1);
    return family::SequenceLp{num(1)};
  }
  if (name == "lebesgue" || name == "L") {
    arity(1);
    return family::LebesgueLp{num(1)};
  }
  if (name == "sup" || name == "linf-x") {
    arity(0);
    return family::SupSpace{};
  }
  if (name == "cb" || name == "c0" || name == "continuous") {
    arity(0);
    return family::ContinuousBounded{};
  }
  if (name == "smooth" || name == "cinf") {
    arity(0);
    return family::Smooth{};
  }
  throw Error(ErrorCode::Parse, "unknown space family '" + name + "'");
}

DomainSpec parse_domain(std::string_view text) {
  auto parts = split(text, ':');
  const std::string name(parts[0]);
  if (name == "seq") {
    if (parts.size() != 1) throw Error(ErrorCode::Parse, "seq takes no parameters");
    return DomainSpec::sequence();
  }
  if (name == "cube" || name == "ball") {
    if (parts.size() < 2 || parts.size() > 3) {
      throw Error(ErrorCode::Parse, name + " expects cube:d or cube:d:extent");
    }
    int d = parse_small_int(parts[1], "dimension");
    Rational extent = 1;
    if (parts.size() == 3) {
      ExtRational e = ExtRational::parse(parts[2]);
      if (e.is_infinite()) throw Error(ErrorCode::Parse, "extent must be finite");
      extent = e.value();
    }
    return name == "cube" ? DomainSpec::cube(d, extent) : DomainSpec::ball(d, extent);
  }
  if (name == "rd") {
    if (parts.size() != 2) throw Error(ErrorCode::Parse, "rd expects rd:d");
    return DomainSpec::space(parse_small_int(parts[1], "dimension"));
  }
  if (name == "metric") {
    auto pos = text.find(':');
    std::vector<std::vector<Rational>> table;
    for (auto row : split(text.substr(pos + 1), ';')) {
      std::vector<Rational> r;
      for (auto v : split(row, ',')) {
        ExtRational x = ExtRational::parse(v);
        if (x.is_infinite()) throw Error(ErrorCode::Parse, "metric entries must be finite");
        r.push_back(x.value());
      }
      table.push_back(std::move(r));
    }
    return DomainSpec::finite(std::move(table));
  }
  throw Error(ErrorCode::Parse, "unknown domain '" + name + "'");
}

SpaceSpec parse_space(std::string_view family_text, const DomainSpec& domain) {
  return SpaceSpec{parse_family(family_text, domain.dimension), domain};
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::ParameterRange: return "parameter-range";
    case ErrorCode::DomainMismatch: return "domain-mismatch";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::NotIdentifiable: return "not-identifiable";
    case ErrorCode::Accuracy: return "accuracy";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::Mode: return "mode";
    case ErrorCode::DomainTooSmall: return "domain-too-small";
    case ErrorCode::DegenerateFit: return "degenerate-fit";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::GridTooLarge: return "grid-too-large";
    case ErrorCode::EmptyInput: return "empty-input";
    case ErrorCode::Unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace sandwich
