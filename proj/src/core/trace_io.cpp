// SPDX-License-Identifier: Apache-2.0
#include "pear/core/trace_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace pear {

using nlohmann::json;

TraceRecord TraceRecord::from(const Response& resp, std::vector<double> entropies) {
  if (entropies.size() != resp.length()) {
    throw std::invalid_argument("entropy array length does not match response");
  }
  return TraceRecord{resp.sequence(), resp.close_index(), resp.prompt_len(),
                     std::move(entropies)};
}

Response TraceRecord::response(const Vocab& vocab) const {
  Response resp(tokens, prompt_len, vocab);
  if (resp.close_index() != close_index || entropies.size() != resp.length()) {
    throw std::invalid_argument("trace record is inconsistent");
  }
  return resp;
}

std::string to_json_line(const TraceRecord& rec) {
  const json j = {{"tokens", rec.tokens},
                  {"close_index", rec.close_index},
                  {"prompt_len", rec.prompt_len},
                  {"entropies", rec.entropies}};
  return j.dump();
}

TraceRecord trace_from_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    TraceRecord rec;
    j.at("tokens").get_to(rec.tokens);
    j.at("close_index").get_to(rec.close_index);
    j.at("prompt_len").get_to(rec.prompt_len);
    j.at("entropies").get_to(rec.entropies);
    return rec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad trace record: ") + e.what());
  }
}

void write_traces(std::ostream& out, const std::vector<TraceRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<TraceRecord> read_traces(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(trace_from_json_line(line));
  }
  return out;
}

}  // namespace pear
