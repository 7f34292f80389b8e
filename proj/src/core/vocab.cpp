// SPDX-License-Identifier: Apache-2.0
#include "pear/core/vocab.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace pear {
namespace {

constexpr std::array<std::string_view, 25> kSpellings = {
    "<pad>", "<eos>", "<bos>", "?", "<think>", "</think>", "|", "=", "+",
    "-",     "*",     "0",     "1", "2",       "3",        "4", "5", "6",
    "7",     "8",     "9",     "wait", "so",   "hmm",      "check"};

}  // namespace

Vocab Vocab::standard() {
  Vocab v;
  v.pad = 0;
  v.eos = 1;
  v.bos = 2;
  v.query = 3;
  v.think_open = 4;
  v.think_close = 5;
  v.step_sep = 6;
  v.equals = 7;
  v.plus = 8;
  v.minus = 9;
  v.times = 10;
  v.digit0 = 11;
  v.filler0 = 21;
  v.num_fillers = 4;
  v.size = 25;
  return v;
}

void Vocab::validate() const {
  if (size < 8 || size > kMaxSize) {
    throw std::invalid_argument("vocabulary size must be in [8, 64]");
  }
  std::vector<TokenId> reserved = {pad,         eos,      bos,    query,
                                   think_open,  think_close, step_sep,
                                   equals,      plus,     minus,  times};
  for (int d = 0; d < 10; ++d) reserved.push_back(digit(d));
  for (std::size_t i = 0; i < num_fillers; ++i) reserved.push_back(filler(i));
  for (TokenId t : reserved) {
    if (t >= size) throw std::invalid_argument("reserved token id out of range");
  }
  std::sort(reserved.begin(), reserved.end());
  if (std::adjacent_find(reserved.begin(), reserved.end()) != reserved.end()) {
    throw std::invalid_argument("reserved token ids must be distinct");
  }
}

std::string_view Vocab::spelling(TokenId t) const {
  if (*this == standard() && t < kSpellings.size()) return kSpellings[t];
  return "<?>";
}

std::string Vocab::render(const std::vector<TokenId>& tokens) const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += spelling(tokens[i]);
  }
  return out;
}

}  // namespace pear
