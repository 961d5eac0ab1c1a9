#include "kpvote/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace kpvote {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_trimmed(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool valid_token(const std::string& t) {
  if (t.empty()) return false;
  for (char c : t) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

struct line_reader {
  std::istringstream stream;
  int line_number = 0;

  explicit line_reader(const std::string& text) : stream(text) {}

  /// Next content line (comments and blanks skipped), or nullopt at the end.
  std::optional<std::pair<std::string, int>> next() {
    std::string raw;
    while (std::getline(stream, raw)) {
      ++line_number;
      std::string content = trim(raw);
      if (content.empty() || content.front() == '#') continue;
      return std::make_pair(content, line_number);
    }
    return std::nullopt;
  }
};

candidate_list parse_header(line_reader& reader) {
  auto line = reader.next();
  if (!line) throw parse_error("missing 'candidates:' header", reader.line_number == 0 ? 1 : reader.line_number);
  const auto& [content, number] = *line;
  const std::string prefix = "candidates:";
  if (content.rfind(prefix, 0) != 0) throw parse_error("missing 'candidates:' header", number);
  std::vector<std::string> names = split_trimmed(content.substr(prefix.size()), ',');
  if (names.size() == 1 && names.front().empty())
    throw parse_error("empty candidate list", number);
  std::vector<std::string> seen;
  for (const std::string& name : names) {
    if (!valid_token(name)) throw parse_error("invalid candidate token '" + name + "'", number);
    if (std::find(seen.begin(), seen.end(), name) != seen.end())
      throw parse_error("duplicate candidate '" + name + "'", number);
    seen.push_back(name);
  }
  if (static_cast<int>(names.size()) > kMaxCandidates)
    throw parse_error("too many candidates", number);
  return candidate_list(std::move(names));
}

ballot parse_ballot_names(const std::string& list, const candidate_list& candidates, int number) {
  std::vector<std::string> names = split_trimmed(list, ',');
  if (names.size() == 1 && names.front().empty()) throw parse_error("empty ballot", number);
  ballot b;
  for (const std::string& name : names) {
    if (name.empty()) throw parse_error("empty ballot entry", number);
    std::optional<int> idx = candidates.index_of(name);
    if (!idx) throw parse_error("unknown candidate '" + name + "'", number);
    if (b.contains(*idx)) throw parse_error("duplicate candidate '" + name + "' in ballot", number);
    b = b | ballot::single(*idx);
  }
  return b;
}

double parse_multiplicity(const std::string& text, int number) {
  if (text.empty()) throw parse_error("invalid multiplicity ''", number);
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw parse_error("invalid multiplicity '" + text + "'", number);
  if (value < 0) throw parse_error("negative multiplicity '" + text + "'", number);
  if (!std::isfinite(value)) throw parse_error("invalid multiplicity '" + text + "'", number);
  return value;
}

}  // namespace

candidate_list::candidate_list(std::vector<std::string> names) : names_(std::move(names)) {
  for (int i = 0; i < static_cast<int>(names_.size()); ++i)
    index_.emplace(names_[static_cast<std::size_t>(i)], i);
}

std::optional<int> candidate_list::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> candidate_list::ballot_names(ballot b) const {
  std::vector<std::string> out;
  for (int i : b.indices()) out.push_back(name(i));
  return out;
}

std::string candidate_list::committee_label(const committee& c) const {
  std::string out;
  for (int i : c.indices()) {
    if (!out.empty()) out += '+';
    out += name(i);
  }
  return out;
}

candidate_list default_candidates(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) names.push_back("c" + std::to_string(i));
  return candidate_list(std::move(names));
}

profile_document parse_profile(const std::string& text) {
  line_reader reader(text);
  candidate_list candidates = parse_header(reader);
  profile entries(candidates.count());
  while (auto line = reader.next()) {
    const auto& [content, number] = *line;
    std::size_t colon = content.find(':');
    if (colon == std::string::npos)
      throw parse_error("expected 'MULTIPLICITY : candidate,candidate'", number);
    double mult = parse_multiplicity(trim(content.substr(0, colon)), number);
    ballot b = parse_ballot_names(content.substr(colon + 1), candidates, number);
    entries.add(b, mult);
  }
  return {std::move(candidates), std::move(entries)};
}

election_document parse_election(const std::string& text) {
  line_reader reader(text);
  candidate_list candidates = parse_header(reader);
  std::vector<ballot> votes;
  int last_line = reader.line_number;
  while (auto line = reader.next()) {
    const auto& [content, number] = *line;
    last_line = number;
    const std::string prefix = "vote:";
    if (content.rfind(prefix, 0) != 0) throw parse_error("expected 'vote: candidate,candidate'", number);
    votes.push_back(parse_ballot_names(content.substr(prefix.size()), candidates, number));
  }
  if (votes.empty()) throw parse_error("election has no votes", last_line);
  return {candidates, election(candidates.count(), std::move(votes))};
}

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (const std::string& part : parts) {
    if (!out.empty()) out += sep;
    out += part;
  }
  return out;
}

}  // namespace

std::string serialize_profile(const profile_document& doc) {
  std::string out = "candidates: " + join(doc.candidates.names(), ",") + "\n";
  for (const auto& [b, m] : doc.entries.entries())
    out += format_real(m) + " : " + join(doc.candidates.ballot_names(b), ",") + "\n";
  return out;
}

std::string serialize_election(const election_document& doc) {
  std::string out = "candidates: " + join(doc.candidates.names(), ",") + "\n";
  for (ballot v : doc.votes.votes())
    out += "vote: " + join(doc.candidates.ballot_names(v), ",") + "\n";
  return out;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

jdoc jdoc::object() {
  jdoc j;
  j.tag_ = tag::object;
  return j;
}
jdoc jdoc::array() {
  jdoc j;
  j.tag_ = tag::array;
  return j;
}
jdoc jdoc::str(std::string value) {
  jdoc j;
  j.tag_ = tag::string;
  j.string_ = std::move(value);
  return j;
}
jdoc jdoc::real(double value) {
  jdoc j;
  j.tag_ = tag::real;
  j.real_ = value;
  return j;
}
jdoc jdoc::integer(long long value) {
  jdoc j;
  j.tag_ = tag::integer;
  j.integer_ = value;
  return j;
}
jdoc jdoc::boolean(bool value) {
  jdoc j;
  j.tag_ = tag::boolean;
  j.bool_ = value;
  return j;
}
jdoc jdoc::null() { return jdoc(); }

jdoc& jdoc::set(const std::string& key, jdoc value) {
  if (tag_ != tag::object) throw internal_error("set() on a non-object json value");
  members_.emplace_back(key, std::move(value));
  return *this;
}

jdoc& jdoc::push(jdoc value) {
  if (tag_ != tag::array) throw internal_error("push() on a non-array json value");
  elements_.push_back(std::move(value));
  return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

void jdoc::write(std::string& out, int indent, int depth) const {
  switch (tag_) {
    case tag::null: out += "null"; return;
    case tag::boolean: out += bool_ ? "true" : "false"; return;
    case tag::integer: out += std::to_string(integer_); return;
    case tag::real: out += format_real(real_); return;
    case tag::string: write_escaped(out, string_); return;
    case tag::array: {
      if (elements_.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i != 0) out += ',';
        newline_indent(out, indent, depth + 1);
        elements_[i].write(out, indent, depth + 1);
      }
      newline_indent(out, indent, depth);
      out += ']';
      return;
    }
    case tag::object: {
      if (members_.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i != 0) out += ',';
        newline_indent(out, indent, depth + 1);
        write_escaped(out, members_[i].first);
        out += indent > 0 ? ": " : ":";
        members_[i].second.write(out, indent, depth + 1);
      }
      newline_indent(out, indent, depth);
      out += '}';
      return;
    }
  }
}

std::string jdoc::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  return out;
}

jdoc outcome_to_json(const outcome& o, const candidate_list& names) {
  jdoc arr = jdoc::array();
  for (const committee& c : o) {
    jdoc names_arr = jdoc::array();
    for (const std::string& name : names.ballot_names(c.members())) names_arr.push(jdoc::str(name));
    arr.push(std::move(names_arr));
  }
  return arr;
}

jdoc election_to_json(const election& e, const candidate_list& names) {
  jdoc arr = jdoc::array();
  for (ballot v : e.votes()) {
    jdoc vote = jdoc::array();
    for (const std::string& name : names.ballot_names(v)) vote.push(jdoc::str(name));
    arr.push(std::move(vote));
  }
  return arr;
}

jdoc profile_to_json(const profile& pi, const candidate_list& names) {
  jdoc arr = jdoc::array();
  for (const auto& [b, m] : pi.entries()) {
    jdoc entry = jdoc::object();
    entry.set("multiplicity", jdoc::real(m));
    jdoc members = jdoc::array();
    for (const std::string& name : names.ballot_names(b)) members.push(jdoc::str(name));
    entry.set("ballot", std::move(members));
    arr.push(std::move(entry));
  }
  return arr;
}

}  // namespace kpvote
