#include "pmatch/model.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace pmatch {

void ModelParams::validate() const {
  if (L < 2 || L > max_programs)
    throw std::invalid_argument("ModelParams: L must be in [2, " +
                                std::to_string(max_programs) + "], got " +
                                std::to_string(L));
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("ModelParams: a must be in (0, 1)");
  if (!(e >= 0.0 && e <= 1.0))
    throw std::invalid_argument("ModelParams: e must be in [0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("ModelParams: epsilon must be in [0, 1/2]");
}

ProgramSet ProgramSet::of(std::initializer_list<int> programs) {
  ProgramSet s;
  for (int p : programs) {
    if (p < 1 || p > ModelParams::max_programs)
      throw std::invalid_argument("ProgramSet: program index out of range");
    s.insert(p);
  }
  return s;
}

int ProgramSet::size() const { return std::popcount(bits_); }

int ProgramSet::min() const {
  if (empty()) throw std::logic_error("ProgramSet::min on empty set");
  return std::countr_zero(bits_) + 1;
}

RankOrderList::RankOrderList(std::vector<int> entries)
    : entries_(std::move(entries)) {
  const int L = static_cast<int>(entries_.size());
  if (L < 1 || L > ModelParams::max_programs)
    throw std::invalid_argument("RankOrderList: bad length");
  std::uint64_t seen = 0;
  for (int p : entries_) {
    if (p < 1 || p > L)
      throw std::invalid_argument("RankOrderList: entry out of range");
    const std::uint64_t bit = std::uint64_t{1} << (p - 1);
    if (seen & bit)
      throw std::invalid_argument("RankOrderList: duplicate entry");
    seen |= bit;
  }
}

RankOrderList RankOrderList::truthful(int L) {
  std::vector<int> entries(L);
  for (int i = 0; i < L; ++i) entries[i] = i + 1;
  return RankOrderList(std::move(entries));
}

RankOrderList build_submitted_list(const PressureSet& F, int L) {
  if (L < 1 || L > ModelParams::max_programs)
    throw std::invalid_argument("build_submitted_list: bad list length");
  if (F.members.empty()) return RankOrderList::truthful(L);
  const std::uint64_t universe = (std::uint64_t{1} << L) - 1;
  if ((F.members.mask() & ~universe) != 0)
    throw std::invalid_argument("build_submitted_list: F outside {1..L}");
  const int first = F.members.min();
  std::vector<int> entries;
  entries.reserve(L);
  entries.push_back(first);
  for (int p = 1; p <= L; ++p)
    if (p != first) entries.push_back(p);
  return RankOrderList(std::move(entries));
}

MatchOutcome match(const RankOrderList& list, const AcceptanceSet& A) {
  for (int p : list.entries())
    if (A.members.contains(p)) return MatchOutcome{p};
  return MatchOutcome{};
}

RankOrderList swap_first_two(const RankOrderList& list) {
  if (list.length() < 2)
    throw std::invalid_argument("swap_first_two: list shorter than 2");
  std::vector<int> entries = list.entries();
  std::swap(entries[0], entries[1]);
  return RankOrderList(std::move(entries));
}

RankOrderList relocate_program(const RankOrderList& list, int program,
                               int position) {
  if (position < 1 || position > list.length())
    throw std::invalid_argument("relocate_program: position out of range");
  std::vector<int> entries;
  entries.reserve(list.length());
  for (int p : list.entries())
    if (p != program) entries.push_back(p);
  if (static_cast<int>(entries.size()) != list.length() - 1)
    throw std::invalid_argument("relocate_program: program not in list");
  entries.insert(entries.begin() + (position - 1), program);
  return RankOrderList(std::move(entries));
}

int realized_rank_loss(const AcceptanceSet& A, const PressureSet& F, int L,
                       bool swapped) {
  if (!F.members.subset_of(A.members))
    throw std::invalid_argument(
        "realized_rank_loss: pressure set not contained in acceptance set");
  if (A.members.empty()) return 0;
  RankOrderList submitted = build_submitted_list(F, L);
  if (swapped) submitted = swap_first_two(submitted);
  const MatchOutcome altered = match(submitted, A);
  const MatchOutcome truthful = match(RankOrderList::truthful(L), A);
  // A nonempty guarantees both sides matched.
  return *altered.matched - *truthful.matched;
}

}  // namespace pmatch
