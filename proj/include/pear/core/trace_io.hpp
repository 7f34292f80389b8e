// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pear/core/response.hpp"

namespace pear {

// One response as written to and read from trace files, one JSON object per
// line: {"tokens": [...], "close_index": k, "prompt_len": n,
// "entropies": [...]}. `tokens` holds the prompt followed by the generated
// tokens; `entropies` has one entry per generated token.
struct TraceRecord {
  std::vector<TokenId> tokens;
  std::size_t close_index = 0;
  std::size_t prompt_len = 0;
  std::vector<double> entropies;

  static TraceRecord from(const Response& resp, std::vector<double> entropies);
  Response response(const Vocab& vocab) const;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

std::string to_json_line(const TraceRecord& rec);
// Throws std::invalid_argument on malformed input.
TraceRecord trace_from_json_line(const std::string& line);

void write_traces(std::ostream& out, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> read_traces(std::istream& in);

}  // namespace pear
