#include "psi/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace psi {

namespace {

using nlohmann::json;

[[noreturn]] void fail_box(int id, std::string_view field, const std::string& what) {
  std::ostringstream os;
  os << "box " << id << ": field '" << field << "': " << what;
  throw ValidationError(os.str());
}

double number_field(const json& obj, const char* name, int id) {
  auto it = obj.find(name);
  if (it == obj.end()) fail_box(id, name, "missing");
  if (!it->is_number()) fail_box(id, name, "not a number");
  return it->get<double>();
}

}  // namespace

Instance parse_instance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("parse failure: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("boxes") || !doc["boxes"].is_array())
    throw ValidationError("parse failure: expected an object with a 'boxes' array");

  Instance inst;
  int position = 0;
  for (const auto& jb : doc["boxes"]) {
    if (!jb.is_object()) throw ValidationError("parse failure: box entry " + std::to_string(position) + " is not an object");
    Box box;
    auto id_it = jb.find("id");
    if (id_it == jb.end() || !id_it->is_number_integer())
      throw ValidationError("box at position " + std::to_string(position) + ": field 'id': missing or not an integer");
    box.id = id_it->get<int>();
    box.cost_full = number_field(jb, "cost_full", box.id);
    box.cost_partial = number_field(jb, "cost_partial", box.id);
    auto out_it = jb.find("outcomes");
    if (out_it == jb.end() || !out_it->is_array()) fail_box(box.id, "outcomes", "missing or not an array");
    for (const auto& jo : *out_it) {
      if (!jo.is_object() || !jo.contains("type") || !jo["type"].is_string())
        fail_box(box.id, "outcomes.type", "missing or not a string");
      JointOutcome o;
      o.type = jo["type"].get<std::string>();
      o.value = number_field(jo, "value", box.id);
      o.prob = number_field(jo, "prob", box.id);
      box.outcomes.push_back(std::move(o));
    }
    inst.boxes.push_back(std::move(box));
    ++position;
  }
  validate(inst);
  return inst;
}

Instance load_instance(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file '" + path + "'");
  return load_instance(in);
}

std::string dump_instance(const Instance& inst) {
  json doc;
  doc["boxes"] = json::array();
  for (const auto& b : inst.boxes) {
    json jb;
    jb["id"] = b.id;
    jb["cost_full"] = b.cost_full;
    jb["cost_partial"] = b.cost_partial;
    jb["outcomes"] = json::array();
    for (const auto& o : b.outcomes)
      jb["outcomes"].push_back({{"type", o.type}, {"value", o.value}, {"prob", o.prob}});
    doc["boxes"].push_back(std::move(jb));
  }
  return doc.dump(1);
}

void validate(Instance& inst) {
  const int n = inst.size();
  if (n == 0) throw ValidationError("instance has no boxes");
  if (n > kMaxBoxes) throw ValidationError("instance has more than 64 boxes");

  std::set<int> seen;
  for (const auto& b : inst.boxes) {
    if (!seen.insert(b.id).second) fail_box(b.id, "id", "duplicate box id");
    if (b.id < 0 || b.id >= n) fail_box(b.id, "id", "ids must be 0.." + std::to_string(n - 1));
  }
  std::sort(inst.boxes.begin(), inst.boxes.end(), [](const Box& a, const Box& b) { return a.id < b.id; });

  for (const auto& b : inst.boxes) {
    if (!std::isfinite(b.cost_full) || b.cost_full < 0) fail_box(b.id, "cost_full", "negative or non-finite cost");
    if (!std::isfinite(b.cost_partial) || b.cost_partial < 0) fail_box(b.id, "cost_partial", "negative or non-finite cost");
    if (b.cost_full == 0) fail_box(b.id, "cost_full", "zero cost makes the opening threshold non-unique");
    if (b.cost_partial == 0) fail_box(b.id, "cost_partial", "zero cost makes the opening threshold non-unique");
    if (b.outcomes.empty()) fail_box(b.id, "outcomes", "at least one outcome required");

    std::set<std::pair<std::string, double>> pairs;
    std::map<std::string, double> type_mass;
    double total = 0.0;
    for (const auto& o : b.outcomes) {
      if (!std::isfinite(o.value) || o.value < 0) fail_box(b.id, "outcomes.value", "negative or non-finite value");
      if (!std::isfinite(o.prob) || o.prob <= 0 || o.prob > 1) fail_box(b.id, "outcomes.prob", "probability must lie in (0, 1]");
      if (!pairs.emplace(o.type, o.value).second)
        fail_box(b.id, "outcomes", "duplicate (type, value) pair (" + o.type + ")");
      type_mass[o.type] += o.prob;
      total += o.prob;
    }
    if (std::abs(total - 1.0) > kTol) {
      std::ostringstream os;
      os.precision(12);
      os << "probabilities sum to " << total;
      fail_box(b.id, "outcomes.prob", os.str());
    }
    if (type_mass.size() > 250) fail_box(b.id, "outcomes.type", "too many types");
  }
}

double DiscreteLaw::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) m += values[k] * probs[k];
  return m;
}

double DiscreteLaw::cdf(double u) const {
  double c = 0.0;
  for (std::size_t k = 0; k < values.size() && values[k] <= u; ++k) c += probs[k];
  return std::min(c, 1.0);
}

DiscreteLaw make_law(std::vector<std::pair<double, double>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  DiscreteLaw law;
  for (const auto& [v, p] : atoms) {
    if (p <= 0) continue;
    if (!law.values.empty() && law.values.back() == v) {
      law.probs.back() += p;
    } else {
      law.values.push_back(v);
      law.probs.push_back(p);
    }
  }
  return law;
}

int BoxLaws::type_index(std::string_view label) const {
  for (int t = 0; t < type_count(); ++t)
    if (types[t] == label) return t;
  return -1;
}

BoxLaws derive_distributions(const Box& box) {
  BoxLaws laws;
  // Types are indexed in order of first appearance.
  for (const auto& o : box.outcomes)
    if (laws.type_index(o.type) < 0) laws.types.push_back(o.type);
  const int m = laws.type_count();
  laws.type_prob.assign(m, 0.0);
  std::vector<std::vector<std::pair<double, double>>> cond(m);
  std::vector<std::pair<double, double>> marg;
  for (const auto& o : box.outcomes) {
    const int t = laws.type_index(o.type);
    laws.type_prob[t] += o.prob;
    cond[t].emplace_back(o.value, o.prob);
    marg.emplace_back(o.value, o.prob);
  }
  for (int t = 0; t < m; ++t) {
    for (auto& [v, p] : cond[t]) p /= laws.type_prob[t];
    laws.conditional.push_back(make_law(std::move(cond[t])));
  }
  laws.marginal = make_law(std::move(marg));
  return laws;
}

std::string_view kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::Stop: return "Stop";
    case ActionKind::FOpen: return "FOpen";
    case ActionKind::POpen: return "POpen";
  }
  return "?";
}

std::string to_string(const Action& a) {
  if (a.kind == ActionKind::Stop) return "Stop";
  return std::string(kind_name(a.kind)) + "," + std::to_string(a.box);
}

bool operator==(const SearchState& a, const SearchState& b) {
  if (a.closed != b.closed || a.partial != b.partial || a.best != b.best) return false;
  for (int i = 0; i < kMaxBoxes; ++i)
    if (a.is_partial(i) && a.type[i] != b.type[i]) return false;
  return true;
}

SearchState initial_state(int n) {
  SearchState s;
  s.closed = all_boxes(n);
  return s;
}

std::string describe(const SearchState& s, const std::vector<BoxLaws>& laws) {
  std::ostringstream os;
  os << "C={";
  bool first = true;
  for (int i = 0; i < kMaxBoxes; ++i)
    if (s.is_closed(i)) {
      os << (first ? "" : ",") << i;
      first = false;
    }
  os << "} P={";
  first = true;
  for (int i = 0; i < kMaxBoxes; ++i)
    if (s.is_partial(i)) {
      os << (first ? "" : ",") << i << ':';
      if (i < static_cast<int>(laws.size()) && s.type[i] < laws[i].types.size())
        os << laws[i].types[s.type[i]];
      else
        os << '#' << int(s.type[i]);
      first = false;
    }
  os.precision(12);
  os << "} y=" << s.best;
  return os.str();
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) pos = text.size();
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

int parse_box_id(std::string_view s, int n) {
  int id = -1;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
  if (ec != std::errc() || p != s.data() + s.size() || id < 0 || id >= n)
    throw ValidationError("state string: bad box id '" + std::string(s) + "'");
  return id;
}

}  // namespace

SearchState parse_state(std::string_view spec, const std::vector<BoxLaws>& laws) {
  const int n = static_cast<int>(laws.size());
  SearchState s;
  for (auto part : split(spec, ';')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ValidationError("state string: expected key=value in '" + std::string(part) + "'");
    auto key = part.substr(0, eq);
    auto val = part.substr(eq + 1);
    if (key == "C") {
      for (auto tok : split(val, ','))
        if (!tok.empty()) s.closed |= bit(parse_box_id(tok, n));
    } else if (key == "P") {
      for (auto tok : split(val, ',')) {
        if (tok.empty()) continue;
        auto colon = tok.find(':');
        if (colon == std::string_view::npos) throw ValidationError("state string: partial entry needs id:type");
        int id = parse_box_id(tok.substr(0, colon), n);
        int t = laws[id].type_index(tok.substr(colon + 1));
        if (t < 0) throw ValidationError("state string: box " + std::to_string(id) + " has no type '" + std::string(tok.substr(colon + 1)) + "'");
        s.partial |= bit(id);
        s.type[id] = static_cast<std::uint8_t>(t);
      }
    } else if (key == "y") {
      try {
        s.best = std::stod(std::string(val));
      } catch (const std::exception&) {
        throw ValidationError("state string: bad y '" + std::string(val) + "'");
      }
    } else {
      throw ValidationError("state string: unknown key '" + std::string(key) + "'");
    }
  }
  if (s.closed & s.partial) throw ValidationError("state string: a box cannot be both closed and partially open");
  return s;
}

StateCodec::StateCodec(const std::vector<BoxLaws>& laws, const std::vector<double>& extra_best) {
  grid_.push_back(0.0);
  for (const auto& l : laws) grid_.insert(grid_.end(), l.marginal.values.begin(), l.marginal.values.end());
  grid_.insert(grid_.end(), extra_best.begin(), extra_best.end());
  std::sort(grid_.begin(), grid_.end());
  grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());

  // Largest representable product, leaving the top bit spare.
  const long double limit = std::ldexp(1.0L, 126);
  long double product = 1.0L;
  unsigned __int128 place = 1;
  for (const auto& l : laws) {
    place_.push_back(place);
    const unsigned radix = 2U + static_cast<unsigned>(l.type_count());
    product *= radix;
    if (product > limit) {
      encodable_ = false;
      return;
    }
    place *= radix;
  }
  best_place_ = place;
  product *= static_cast<long double>(grid_.size());
  if (product > limit) encodable_ = false;
}

int StateCodec::best_index(double y) const {
  auto it = std::lower_bound(grid_.begin(), grid_.end(), y);
  if (it == grid_.end() || *it != y) return -1;
  return static_cast<int>(it - grid_.begin());
}

StateKey StateCodec::encode(const SearchState& s) const {
  if (!encodable_) throw std::length_error("state space too large for the 128-bit state key");
  const int yi = best_index(s.best);
  if (yi < 0) throw std::invalid_argument("best prize is not on the finite value grid");
  unsigned __int128 key = static_cast<unsigned __int128>(yi) * best_place_;
  for (std::size_t i = 0; i < place_.size(); ++i) {
    const int id = static_cast<int>(i);
    unsigned digit = 0;
    if (s.is_closed(id)) digit = 1;
    else if (s.is_partial(id)) digit = 2U + s.type[i];
    key += digit * place_[i];
  }
  return StateKey{key};
}

SearchState StateCodec::decode(StateKey key) const {
  SearchState s;
  unsigned __int128 rest = key.bits;
  for (std::size_t i = 0; i < place_.size(); ++i) {
    const unsigned __int128 radix = (i + 1 < place_.size() ? place_[i + 1] : best_place_) / place_[i];
    const auto digit = static_cast<unsigned>(rest % radix);
    rest /= radix;
    const int id = static_cast<int>(i);
    if (digit == 1) s.closed |= bit(id);
    if (digit >= 2) {
      s.partial |= bit(id);
      s.type[i] = static_cast<std::uint8_t>(digit - 2);
    }
  }
  s.best = grid_.at(static_cast<std::size_t>(rest));
  return s;
}

}  // namespace psi
