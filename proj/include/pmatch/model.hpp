#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <vector>

// Reduced-form model of a single doctor facing L acceptable residency
// programs. Programs are identified by their true-preference rank: program i
// is the doctor's i-th most preferred, so no separate id space exists and a
// matched program index *is* its rank in the true preferences.

namespace pmatch {

// Process parameters.
//   L       number of acceptable programs (>= 2)
//   a       probability a program accepts the doctor, in (0,1)
//   e       probability an accepting program exerts effective pressure;
//           0 and 1 are allowed as exact boundary evaluations
//   epsilon probability the clearinghouse swaps the first two entries of
//           the submitted list, in [0, 1/2]
struct ModelParams {
  int L = 2;
  double a = 0.5;
  double e = 0.0;
  double epsilon = 0.0;

  // Largest L representable by ProgramSet's 64-bit mask.
  static constexpr int max_programs = 63;

  void validate() const;  // throws std::invalid_argument on a bad field
};

// Subset of the programs {1..L}, stored as a bitmask (bit i-1 = program i).
class ProgramSet {
 public:
  constexpr ProgramSet() = default;

  static constexpr ProgramSet from_mask(std::uint64_t bits) {
    ProgramSet s;
    s.bits_ = bits;
    return s;
  }
  static ProgramSet of(std::initializer_list<int> programs);

  bool contains(int program) const { return (bits_ >> (program - 1)) & 1u; }
  bool empty() const { return bits_ == 0; }
  int size() const;
  int min() const;  // smallest member; requires !empty()
  bool subset_of(ProgramSet other) const { return (bits_ & ~other.bits_) == 0; }
  void insert(int program) { bits_ |= std::uint64_t{1} << (program - 1); }
  std::uint64_t mask() const { return bits_; }

  friend bool operator==(ProgramSet, ProgramSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

// The programs that would accept the doctor.
struct AcceptanceSet {
  ProgramSet members;
};

// The programs exerting effective pressure to be listed first. Only
// accepting programs can pressure, so a PressureSet is always paired with
// an AcceptanceSet it must be a subset of; operations check this.
struct PressureSet {
  ProgramSet members;
};

// Permutation of {1..L}; entry(k) is the program listed k-th.
class RankOrderList {
 public:
  explicit RankOrderList(std::vector<int> entries);  // validates permutation
  static RankOrderList truthful(int L);              // (1, ..., L)

  int length() const { return static_cast<int>(entries_.size()); }
  int entry(int position) const { return entries_[position - 1]; }
  const std::vector<int>& entries() const { return entries_; }

  friend bool operator==(const RankOrderList&, const RankOrderList&) = default;

 private:
  std::vector<int> entries_;
};

// Match result. A doctor is unmatched only when no listed program accepts,
// i.e. when the acceptance set is empty.
struct MatchOutcome {
  std::optional<int> matched;

  bool is_matched() const { return matched.has_value(); }
  // Equal to the matched program index because program index == true rank.
  std::optional<int> rank_in_true_preferences() const { return matched; }
};

// Submitted list under pressure structure F: if F is empty the doctor
// submits the true preference order (1..L); otherwise min(F) is listed
// first and the remaining programs follow in true-preference order.
RankOrderList build_submitted_list(const PressureSet& F, int L);

// The doctor is matched with the first listed program that accepts.
MatchOutcome match(const RankOrderList& list, const AcceptanceSet& A);

// The random-exchange intervention's deterministic half: (l2, l1, l3, ..).
RankOrderList swap_first_two(const RankOrderList& list);

// Moves one program to the given position, preserving the relative order of
// every other entry. This is the list a doctor submits when complying with
// a demand to rank `program` at position k.
RankOrderList relocate_program(const RankOrderList& list, int program,
                               int position);

// Rank of the match under the (optionally swapped) pressured list minus the
// rank under the truthful list; 0 when A is empty. Both sides are unmatched
// exactly when A is empty, so the difference is always well defined.
// The intervention-only loss is obtained with F empty and swapped = true.
// Throws std::invalid_argument if F is not a subset of A.
int realized_rank_loss(const AcceptanceSet& A, const PressureSet& F, int L,
                       bool swapped);

}  // namespace pmatch
