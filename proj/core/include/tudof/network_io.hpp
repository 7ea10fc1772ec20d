#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tudof/network.hpp"

namespace tudof {

// Shortest decimal text that parses back to the same double.
std::string format_real(double x);
// Whole-token decimal parse; nullopt on trailing garbage.
std::optional<double> parse_real(std::string_view token);

struct ParsedNetwork {
  NetworkBuilder draft;
  std::optional<std::uint64_t> seed;
};

// Parses the line format (`layers`, `node`, `edge`, `pairs`, `seed`, `#` comments).
// `rand` gains are drawn from the declared seed (0 when absent) in file order.
ParsedNetwork parse_network_text(std::string_view text);
std::string serialize_network(const LayeredNetwork& net);

// Parse, validate and prune; throws ParseError or ValidationError.
LayeredNetwork read_network_file(const std::filesystem::path& path);
LayeredNetwork network_from_text(std::string_view text);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace tudof
