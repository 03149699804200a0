#include "critwave/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace critwave {

WaveState::WaveState(RadialField displacement, RadialField velocity, double time)
    : u(std::move(displacement)), u_t(std::move(velocity)), t(time) {
  if (!(u.grid == u_t.grid)) throw std::invalid_argument("u and u_t must share a grid");
  if (u.size() != u.grid.size() || u_t.size() != u_t.grid.size())
    throw std::invalid_argument("field length does not match its grid");
}

WaveState WaveState::zero(const RadialGrid& grid) { return WaveState(RadialField(grid), RadialField(grid)); }

bool WaveState::is_zero() const {
  auto zero = [](double v) { return v == 0.0; };
  return std::all_of(u.values.begin(), u.values.end(), zero) &&
         std::all_of(u_t.values.begin(), u_t.values.end(), zero);
}

std::string to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Dispersed: return "Dispersed";
    case OutcomeKind::BlewUp: return "BlewUp";
    case OutcomeKind::Undecided: return "Undecided";
  }
  return "Undecided";
}

}  // namespace critwave
