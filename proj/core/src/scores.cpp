#include "kpvote/scores.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <numeric>

namespace kpvote {

norm_exponent norm_exponent::parse(const std::string& text) {
  std::string lower;
  lower.reserve(text.size());
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "inf") return infinity();
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw domain_error("invalid norm exponent '" + text + "'");
  return finite(v);
}

std::string norm_exponent::to_string() const {
  if (is_infinite()) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value_);
  return buf;
}

double lp_weight(int ballot_size, norm_exponent p) {
  if (ballot_size < 1) throw domain_error("ballot size must be positive");
  if (p.is_infinite() || ballot_size == 1) return 1.0;
  return std::pow(static_cast<double>(ballot_size), -1.0 / p.value());
}

double candidate_score(int candidate, const profile& pi, norm_exponent p) {
  if (candidate < 0 || candidate >= pi.candidate_count())
    throw domain_error("unknown candidate index");
  double s = 0;
  for (const auto& [b, m] : pi.entries())
    if (b.contains(candidate)) s += m * lp_weight(b.size(), p);
  return s;
}

std::vector<double> candidate_scores(const profile& pi, norm_exponent p) {
  std::vector<double> scores(static_cast<std::size_t>(pi.candidate_count()), 0.0);
  for (const auto& [b, m] : pi.entries()) {
    double w = m * lp_weight(b.size(), p);
    for (std::uint32_t bits = b.mask(); bits != 0; bits &= bits - 1)
      scores[static_cast<std::size_t>(std::countr_zero(bits))] += w;
  }
  return scores;
}

double committee_score(const committee& k, const profile& pi, norm_exponent p) {
  if (!k.members().subset_of(ballot::universe(pi.candidate_count())))
    throw domain_error("committee outside candidate universe");
  double s = 0;
  for (const auto& [b, m] : pi.entries())
    s += m * static_cast<double>((b & k.members()).size()) * lp_weight(b.size(), p);
  return s;
}

namespace detail {

std::uint64_t ballot_size_lcm(const profile& pi) {
  std::uint64_t l = 1;
  for (const auto& [b, m] : pi.entries()) {
    l = std::lcm(l, static_cast<std::uint64_t>(b.size()));
    if (l > (std::uint64_t{1} << 32)) return 0;
  }
  return l;
}

}  // namespace detail

comparison_basis comparison_scores(const profile& pi, norm_exponent p) {
  const int n = pi.candidate_count();
  comparison_basis basis;
  basis.values.assign(static_cast<std::size_t>(n), 0.0);

  if (p.is_infinite()) {
    for (const auto& [b, m] : pi.entries())
      for (std::uint32_t bits = b.mask(); bits != 0; bits &= bits - 1)
        basis.values[static_cast<std::size_t>(std::countr_zero(bits))] += m;
    basis.exact = pi.integral();
    basis.scale = 1.0;
    return basis;
  }

  if (p.is_one()) {
    if (std::uint64_t l = detail::ballot_size_lcm(pi); l != 0) {
      for (const auto& [b, m] : pi.entries()) {
        double w = m * static_cast<double>(l / static_cast<std::uint64_t>(b.size()));
        for (std::uint32_t bits = b.mask(); bits != 0; bits &= bits - 1)
          basis.values[static_cast<std::size_t>(std::countr_zero(bits))] += w;
      }
      basis.scale = static_cast<double>(l);
      basis.exact = pi.integral();
      if (basis.exact)
        for (double v : basis.values)
          if (v > 0x1p53) basis.exact = false;
      return basis;
    }
  }

  basis.values = candidate_scores(pi, p);
  basis.exact = false;
  basis.scale = 1.0;
  return basis;
}

}  // namespace kpvote
