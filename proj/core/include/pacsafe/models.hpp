#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pacsafe/mealy.hpp"

namespace pacsafe {

/// Lane-keeping steering model. States C (centre), L, R (at a lane
/// boundary) and A (alarm); inputs l, r, s. Without assistance A is
/// absorbing; with assistance every input leads from A back to C.
MealyMachine build_alks(bool with_assist);

/// Best-effort coffee machine: states a..f, f is the absorbing error state.
/// Any button press before the machine is ready errors.
MealyMachine build_coffee();

/// Two states, both safe, `alphabet_size` inputs.
MealyMachine all_safe_machine(std::size_t alphabet_size);
/// One unsafe state looping on every input.
MealyMachine none_safe_machine(std::size_t alphabet_size);

struct RandomMachineParams {
  std::size_t states = 5;
  std::size_t alphabet_size = 2;
  /// Fraction of non-initial states labeled unsafe. The initial state is
  /// always safe.
  double unsafe_fraction = 0.3;
  /// Unsafe states self-loop on every input.
  bool absorbing_unsafe = true;
  std::uint64_t seed = 0;
};

MealyMachine random_machine(const RandomMachineParams& params);

/// Directory holding the bundled `.machine` files: $PACSAFE_MODEL_DIR if
/// set, else the install location.
std::filesystem::path model_directory();

std::vector<std::string> bundled_model_names();

/// Loads `<model_directory()>/<name>.machine`.
MealyMachine load_bundled_model(std::string_view name);

}  // namespace pacsafe
