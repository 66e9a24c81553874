#include "evsys/parser.hpp"

#include <cctype>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

namespace evsys {

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line_no = 1;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_no, static_cast<int>(pos) + 1);
  }

  bool at_end() const { return pos >= text.size(); }
  char peek() const { return at_end() ? '\0' : text[pos]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool try_consume(const std::string& token) {
    if (text.compare(pos, token.size(), token) == 0) {
      pos += token.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& token, const std::string& what) {
    if (!try_consume(token)) fail("expected " + what);
  }

  std::string parse_ident() {
    if (at_end() || !std::isalpha(static_cast<unsigned char>(peek())))
      fail("expected a species name");
    std::size_t start = pos;
    ++pos;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  long parse_uint() {
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected an integer");
    long value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      if (value > 1000000) fail("stoichiometric coefficient too large");
      ++pos;
    }
    return value;
  }

  std::string parse_rate_token() {
    std::size_t start = pos;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected a rate value");
    return text.substr(start, pos - start);
  }
};

struct Term {
  Index species;
  long coeff;
};

struct PendingReaction {
  std::vector<Term> reactants;
  std::vector<Term> products;
  Rational kf;
  Rational kr;
  int line_no;
  int col;
};

class SpeciesTable {
 public:
  Index intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const Index id = static_cast<Index>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Index> index_;
};

// side := '0' | epsilon | term ('+' term)*, ending at "<->" or ';'.
std::vector<Term> parse_side(Cursor& cur, SpeciesTable& table, bool lhs) {
  std::vector<Term> terms;
  cur.skip_ws();
  const std::string stop = lhs ? "<->" : ";";
  if (cur.text.compare(cur.pos, stop.size(), stop) == 0) return terms;
  if (cur.peek() == '0') {
    std::size_t save = cur.pos;
    ++cur.pos;
    cur.skip_ws();
    if (cur.text.compare(cur.pos, stop.size(), stop) == 0) return terms;
    cur.pos = save;
  }
  while (true) {
    cur.skip_ws();
    long coeff = 1;
    if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      coeff = cur.parse_uint();
      if (coeff == 0) cur.fail("stoichiometric coefficients must be positive");
      cur.skip_ws();
    }
    const std::string name = cur.parse_ident();
    terms.push_back(Term{table.intern(name), coeff});
    cur.skip_ws();
    if (cur.peek() == '+') {
      ++cur.pos;
      continue;
    }
    break;
  }
  return terms;
}

Rational parse_rate(Cursor& cur, const char* which) {
  const std::size_t start = cur.pos;
  const std::string token = cur.parse_rate_token();
  Rational rate;
  try {
    rate = parse_rational(token);
  } catch (const Error&) {
    cur.pos = start;
    cur.fail(std::string("malformed ") + which + " rate: '" + token + "'");
  }
  if (!rate.positive()) {
    cur.pos = start;
    throw PhysicalityError("line " + std::to_string(cur.line_no) + ": " + which +
                           " rate must be positive, got " + to_string(rate));
  }
  return rate;
}

Monomial side_monomial(const std::vector<Term>& terms, Index n) {
  ExponentVector e = ExponentVector::Zero(n);
  for (const Term& t : terms) e[t.species] += static_cast<int>(t.coeff);
  return Monomial(std::move(e));
}

}  // namespace

EventSystem parse_system(const std::string& text) {
  SpeciesTable table;
  std::vector<PendingReaction> reactions;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Cursor cur{raw, 0, line_no};
    cur.skip_ws();
    if (cur.at_end()) continue;

    if (cur.try_consume("@species")) {
      cur.skip_ws();
      if (cur.at_end()) cur.fail("@species needs at least one name");
      while (!cur.at_end()) {
        table.intern(cur.parse_ident());
        cur.skip_ws();
      }
      continue;
    }

    // Optional "label:" prefix.
    {
      std::size_t save = cur.pos;
      if (std::isalpha(static_cast<unsigned char>(cur.peek()))) {
        cur.parse_ident();
        cur.skip_ws();
        if (cur.peek() == ':') {
          ++cur.pos;
        } else {
          cur.pos = save;
        }
      }
    }

    PendingReaction rx;
    rx.line_no = line_no;
    rx.col = static_cast<int>(cur.pos) + 1;
    rx.reactants = parse_side(cur, table, true);
    cur.skip_ws();
    cur.expect("<->", "'<->'");
    rx.products = parse_side(cur, table, false);
    cur.skip_ws();
    cur.expect(";", "';' before the rates");
    cur.skip_ws();
    cur.expect("kf", "'kf='");
    cur.skip_ws();
    cur.expect("=", "'=' after kf");
    cur.skip_ws();
    rx.kf = parse_rate(cur, "kf");
    cur.skip_ws();
    cur.expect("kr", "'kr='");
    cur.skip_ws();
    cur.expect("=", "'=' after kr");
    cur.skip_ws();
    rx.kr = parse_rate(cur, "kr");
    cur.skip_ws();
    if (!cur.at_end()) cur.fail("unexpected trailing text");
    reactions.push_back(std::move(rx));
  }

  if (reactions.empty()) {
    throw ParseError("no reactions found", line_no == 0 ? 1 : line_no, 1);
  }

  const Index n = static_cast<Index>(table.names().size());
  std::vector<Event> events;
  events.reserve(reactions.size());
  for (const PendingReaction& rx : reactions) {
    Monomial reactant = side_monomial(rx.reactants, n);
    Monomial product = side_monomial(rx.products, n);
    Event event;
    try {
      event = canonicalize_event(rx.kf, std::move(reactant), rx.kr, std::move(product));
    } catch (const InvalidEventError&) {
      throw InvalidEventError("line " + std::to_string(rx.line_no) +
                              ": both sides of the reaction are the same monomial");
    }
    for (const Event& prior : events) {
      if (prior == event) {
        throw InvalidEventError("line " + std::to_string(rx.line_no) +
                                ": duplicate of an earlier canonical event");
      }
    }
    events.push_back(std::move(event));
  }

  return EventSystem(table.names(), std::move(events));
}

namespace {

std::string side_string(const Monomial& m, std::span<const std::string> species) {
  std::string out;
  for (Index i = 0; i < m.dimension(); ++i) {
    const int e = m.exponent(i);
    if (e == 0) continue;
    if (!out.empty()) out += " + ";
    if (e > 1) out += std::to_string(e) + " ";
    out += species[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

std::string serialize_system(const EventSystem& sys) {
  std::ostringstream out;
  out << "@species";
  for (const std::string& name : sys.species()) out << ' ' << name;
  out << '\n';
  for (const Event& e : sys.events()) {
    out << side_string(e.lo, sys.species()) << " <-> " << side_string(e.hi, sys.species())
        << " ; kf=" << to_string(e.sigma) << " kr=" << to_string(e.tau) << '\n';
  }
  return out.str();
}

}  // namespace evsys
