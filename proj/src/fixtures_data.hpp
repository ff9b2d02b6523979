#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace nsa::detail {

/// (file name, contents) for every fixture, sorted by name.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_fixtures();

}  // namespace nsa::detail
