// SPDX-License-Identifier: Apache-2.0
#include <map>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "pear/analysis/analysis.hpp"

namespace pear {

EntropyLengthReport entropy_length_report(std::span<const EpisodeStats> episodes,
                                          std::size_t bucket_width) {
  if (episodes.size() < 3) throw std::invalid_argument("need at least three episodes");
  if (bucket_width == 0) throw std::invalid_argument("bucket width must be positive");
  std::vector<double> h, len;
  std::map<std::size_t, LengthBucket> buckets;
  for (const EpisodeStats& e : episodes) {
    h.push_back(e.h_mean);
    len.push_back(static_cast<double>(e.length));
    LengthBucket& b = buckets[e.length / bucket_width];
    ++b.count;
    b.mean_h += e.h_mean;
    b.mean_len += static_cast<double>(e.length);
  }
  EntropyLengthReport report;
  report.n = episodes.size();
  report.pearson_r = pearson(h, len);
  for (auto& [k, b] : buckets) {
    b.lo = k * bucket_width;
    b.hi = b.lo + bucket_width;
    b.mean_h /= static_cast<double>(b.count);
    b.mean_len /= static_cast<double>(b.count);
    report.buckets.push_back(b);
  }
  return report;
}

PhaseEntropyReport phase_entropy_report(std::span<const EpisodeStats> episodes) {
  if (episodes.empty()) throw std::invalid_argument("no episodes");
  PhaseEntropyReport r;
  r.n = episodes.size();
  for (const EpisodeStats& e : episodes) {
    r.mean_h_think += e.h_think;
    r.mean_h_answer += e.h_answer;
    r.mean_diff += e.h_think - e.h_answer;
  }
  const double n = static_cast<double>(r.n);
  r.mean_h_think /= n;
  r.mean_h_answer /= n;
  r.mean_diff /= n;
  return r;
}

PhaseShift phase_entropy_shift(std::span<const EpisodeStats> before,
                               std::span<const EpisodeStats> after) {
  PhaseShift s{phase_entropy_report(before), phase_entropy_report(after), 0.0, 0.0};
  s.drop_think = s.before.mean_h_think - s.after.mean_h_think;
  s.drop_answer = s.before.mean_h_answer - s.after.mean_h_answer;
  return s;
}

StepTable step_stats(std::span<const EpisodeStats> episodes) {
  StepTable t;
  t.n = episodes.size();
  if (episodes.empty()) return t;
  for (const EpisodeStats& e : episodes) {
    t.mean_steps_think += static_cast<double>(e.steps_think);
    t.mean_steps_answer += static_cast<double>(e.steps_answer);
    t.mean_tokens_per_step_think += e.tokens_per_step_think;
    t.mean_tokens_per_step_answer += e.tokens_per_step_answer;
  }
  const double n = static_cast<double>(t.n);
  t.mean_steps_think /= n;
  t.mean_steps_answer /= n;
  t.mean_tokens_per_step_think /= n;
  t.mean_tokens_per_step_answer /= n;
  return t;
}

namespace {

// Shortest round-trip representation, so tables are byte-stable.
std::string num(double x) { return fmt::format("{}", x); }

}  // namespace

void write_eval_csv(std::ostream& out, std::span<const EvalRow> rows) {
  out << "difficulty,n,accuracy,mean_len,mean_think_len,mean_answer_len\n";
  for (const EvalRow& r : rows) {
    out << r.difficulty << ',' << r.n << ',' << num(r.accuracy) << ',' << num(r.mean_len)
        << ',' << num(r.mean_think_len) << ',' << num(r.mean_answer_len) << '\n';
  }
}

void write_entropy_length_csv(std::ostream& out, const EntropyLengthReport& report) {
  out << "len_lo,len_hi,count,mean_h,mean_len\n";
  for (const LengthBucket& b : report.buckets) {
    out << b.lo << ',' << b.hi << ',' << b.count << ',' << num(b.mean_h) << ','
        << num(b.mean_len) << '\n';
  }
}

void write_correlation_csv(std::ostream& out, const EntropyLengthReport& report) {
  out << "n,pearson_r\n";
  out << report.n << ',' << (report.pearson_r ? num(*report.pearson_r) : "undefined") << '\n';
}

void write_phase_csv(std::ostream& out, const PhaseEntropyReport& r) {
  out << "n,mean_h_think,mean_h_answer,mean_diff\n";
  out << r.n << ',' << num(r.mean_h_think) << ',' << num(r.mean_h_answer) << ','
      << num(r.mean_diff) << '\n';
}

void write_phase_shift_csv(std::ostream& out, const PhaseShift& s) {
  out << "set,n,mean_h_think,mean_h_answer,mean_diff\n";
  for (const auto& [name, r] : {std::pair{"before", s.before}, std::pair{"after", s.after}}) {
    out << name << ',' << r.n << ',' << num(r.mean_h_think) << ',' << num(r.mean_h_answer)
        << ',' << num(r.mean_diff) << '\n';
  }
  out << "drop,," << num(s.drop_think) << ',' << num(s.drop_answer) << ",\n";
}

void write_step_csv(std::ostream& out, std::span<const StepTable> rows,
                    std::span<const std::string> labels) {
  if (rows.size() != labels.size()) throw std::invalid_argument("one label per row");
  out << "set,n,mean_steps_think,mean_steps_answer,mean_tokens_per_step_think,"
         "mean_tokens_per_step_answer\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const StepTable& t = rows[i];
    out << labels[i] << ',' << t.n << ',' << num(t.mean_steps_think) << ','
        << num(t.mean_steps_answer) << ',' << num(t.mean_tokens_per_step_think) << ','
        << num(t.mean_tokens_per_step_answer) << '\n';
  }
}

void write_filter_csv(std::ostream& out, std::span<const FilterResult> rows) {
  out << "retain_fraction,n,accuracy,mean_len,mean_answer_len,mean_think_kept\n";
  for (const FilterResult& r : rows) {
    out << num(r.retain_fraction) << ',' << r.n << ',' << num(r.accuracy) << ','
        << num(r.mean_len) << ',' << num(r.mean_answer_len) << ',' << num(r.mean_think_kept)
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "label,reward,alpha,accuracy,mean_len,h_think,h_answer\n";
  for (const SweepRow& r : rows) {
    out << r.label << ',' << to_string(r.reward) << ',' << num(r.alpha) << ','
        << num(r.accuracy) << ',' << num(r.mean_len) << ',' << num(r.h_think) << ','
        << num(r.h_answer) << '\n';
  }
}

}  // namespace pear
