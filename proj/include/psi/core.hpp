#pragma once

// Instance representation, derived per-box distributions and the canonical
// encoding of search states shared by every solver.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psi {

inline constexpr int kMaxBoxes = 64;
inline constexpr double kTol = 1e-9;

// Box ids are dense, so a set of boxes is a bitmask.
using BoxSet = std::uint64_t;

constexpr BoxSet bit(int i) { return BoxSet{1} << i; }
constexpr bool contains(BoxSet s, int i) { return (s >> i) & 1U; }
constexpr BoxSet all_boxes(int n) { return n >= 64 ? ~BoxSet{0} : bit(n) - 1; }

struct JointOutcome {
  std::string type;
  double value = 0.0;
  double prob = 0.0;
};

struct Box {
  int id = 0;
  double cost_full = 0.0;
  double cost_partial = 0.0;
  std::vector<JointOutcome> outcomes;
};

struct Instance {
  std::vector<Box> boxes;

  int size() const { return static_cast<int>(boxes.size()); }
};

/// Thrown for malformed or invariant-violating input. The message names the
/// offending box and field.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance parse_instance(std::string_view json_text);
Instance load_instance(std::istream& in);
Instance load_instance_file(const std::string& path);
std::string dump_instance(const Instance& inst);

/// Checks every Box/Instance invariant; throws ValidationError on the first
/// violation. Boxes are reordered by id.
void validate(Instance& inst);

/// Finite distribution with sorted, distinct support.
struct DiscreteLaw {
  std::vector<double> values;
  std::vector<double> probs;

  std::size_t size() const { return values.size(); }
  double mean() const;
  double min_value() const { return values.front(); }
  double max_value() const { return values.back(); }
  /// P[X <= u]
  double cdf(double u) const;
  /// P[X > u]
  double tail(double u) const { return 1.0 - cdf(u); }
};

/// Builds a law from (value, mass) pairs. Equal values are merged, zero
/// masses dropped.
DiscreteLaw make_law(std::vector<std::pair<double, double>> atoms);

struct BoxLaws {
  std::vector<std::string> types;          // type index -> label
  std::vector<double> type_prob;           // P[T = t]
  std::vector<DiscreteLaw> conditional;    // law of V given T = t
  DiscreteLaw marginal;                    // law of V

  int type_count() const { return static_cast<int>(types.size()); }
  int type_index(std::string_view label) const;  // -1 if absent
};

BoxLaws derive_distributions(const Box& box);

enum class ActionKind : std::uint8_t { Stop, FOpen, POpen };

struct Action {
  ActionKind kind = ActionKind::Stop;
  int box = -1;

  static constexpr Action stop() { return {ActionKind::Stop, -1}; }
  static constexpr Action f_open(int i) { return {ActionKind::FOpen, i}; }
  static constexpr Action p_open(int i) { return {ActionKind::POpen, i}; }

  friend constexpr bool operator==(const Action&, const Action&) = default;
};

/// "Stop", "FOpen,<id>" or "POpen,<id>".
std::string to_string(const Action& a);
std::string_view kind_name(ActionKind k);

/// (closed set, partially open boxes with revealed type index, best prize).
struct SearchState {
  BoxSet closed = 0;
  BoxSet partial = 0;
  std::array<std::uint8_t, kMaxBoxes> type{};
  double best = 0.0;

  bool is_closed(int i) const { return contains(closed, i); }
  bool is_partial(int i) const { return contains(partial, i); }
  bool empty() const { return (closed | partial) == 0; }

  friend bool operator==(const SearchState& a, const SearchState& b);
};

SearchState initial_state(int n);

/// Human readable form, e.g. "C={0,2} P={1:B} y=1".
std::string describe(const SearchState& s, const std::vector<BoxLaws>& laws);

/// Parses "C=0,1;P=2:B;y=1.5" (any part may be omitted; labels are type
/// names). Used by the CLI.
SearchState parse_state(std::string_view spec, const std::vector<BoxLaws>& laws);

/// Opaque, injective key of a search state.
struct StateKey {
  unsigned __int128 bits = 0;
  friend constexpr bool operator==(const StateKey&, const StateKey&) = default;
  friend constexpr bool operator<(const StateKey& a, const StateKey& b) { return a.bits < b.bits; }
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    auto lo = static_cast<std::uint64_t>(k.bits);
    auto hi = static_cast<std::uint64_t>(k.bits >> 64);
    std::uint64_t x = lo ^ (hi * 0x9E3779B97F4A7C15ULL);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }
};

/// Mixed-radix encoder: each box contributes one digit (0 gone, 1 closed,
/// 2 + t partial with type t) and the best prize contributes its index in the
/// finite grid {0} U supports U extras.
class StateCodec {
 public:
  StateCodec() = default;
  StateCodec(const std::vector<BoxLaws>& laws, const std::vector<double>& extra_best);

  /// False when the state space does not fit in 128 bits.
  bool encodable() const { return encodable_; }
  StateKey encode(const SearchState& s) const;
  SearchState decode(StateKey key) const;
  const std::vector<double>& best_grid() const { return grid_; }
  /// Index of y in the grid, or -1.
  int best_index(double y) const;

 private:
  std::vector<unsigned __int128> place_;
  unsigned __int128 best_place_ = 1;
  std::vector<double> grid_;
  bool encodable_ = true;
};

}  // namespace psi
