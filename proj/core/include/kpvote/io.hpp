#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kpvote/distrat.hpp"
#include "kpvote/types.hpp"

namespace kpvote {

/// A parse failure with the 1-based line it occurred on. what() carries the
/// full "… at line N" message.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& message, int line)
      : std::runtime_error(message + " at line " + std::to_string(line)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Ordered candidate names plus index lookup. Tokens match [A-Za-z0-9_-]+.
class candidate_list {
 public:
  explicit candidate_list(std::vector<std::string> names);
  int count() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index_of(const std::string& name) const;

  std::vector<std::string> ballot_names(ballot b) const;
  std::string committee_label(const committee& c) const;  // "+"-joined member names

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

/// Synthesized names c1..cn, matching the convention used when no file
/// supplies names.
candidate_list default_candidates(int n);

struct profile_document {
  candidate_list candidates;
  profile entries;
};

struct election_document {
  candidate_list candidates;
  election votes;
};

/// Text grammar shared by both formats: optional '#'-comment and blank
/// lines; first content line `candidates: a,b,c`; then `MULT : a,b` lines
/// for profiles or `vote: a,b` lines for elections. Multiplicities are
/// nonnegative decimals; duplicate ballot lines accumulate.
profile_document parse_profile(const std::string& text);
election_document parse_election(const std::string& text);

/// Canonical renderings (sorted ballots, comments stripped); parsing them
/// back reproduces the document.
std::string serialize_profile(const profile_document& doc);
std::string serialize_election(const election_document& doc);

/// "%.12g" rendering used for every real emitted by the tools.
std::string format_real(double value);

/// Minimal deterministic JSON document: insertion-ordered objects, reals via
/// format_real. Build with the static factories, then dump().
class jdoc {
 public:
  static jdoc object();
  static jdoc array();
  static jdoc str(std::string value);
  static jdoc real(double value);
  static jdoc integer(long long value);
  static jdoc boolean(bool value);
  static jdoc null();

  jdoc& set(const std::string& key, jdoc value);  // object members, insertion order
  jdoc& push(jdoc value);                         // array elements

  std::string dump(int indent = 2) const;

 private:
  enum class tag { object, array, string, real, integer, boolean, null };
  tag tag_ = tag::null;
  std::string string_;
  double real_ = 0;
  long long integer_ = 0;
  bool bool_ = false;
  std::vector<std::pair<std::string, jdoc>> members_;
  std::vector<jdoc> elements_;

  void write(std::string& out, int indent, int depth) const;
};

/// Committees as arrays of member names (members in index order, committees
/// in lexicographic order).
jdoc outcome_to_json(const outcome& o, const candidate_list& names);
jdoc election_to_json(const election& e, const candidate_list& names);
jdoc profile_to_json(const profile& pi, const candidate_list& names);

}  // namespace kpvote
