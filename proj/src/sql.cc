#include "qcomplete/sql.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace qcomplete {

const char* op_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::IsNull: return "IS NULL";
    case CompareOp::IsNotNull: return "IS NOT NULL";
  }
  return "?";
}

bool is_null_test(CompareOp op) { return op == CompareOp::IsNull || op == CompareOp::IsNotNull; }

Atom Atom::compare(ColumnRef lhs, CompareOp op, SqlValue value) {
  Atom a;
  a.lhs = std::move(lhs);
  a.op = op;
  a.rhs = std::move(value);
  return a;
}

Atom Atom::compare(ColumnRef lhs, CompareOp op, ColumnRef other) {
  Atom a;
  a.lhs = std::move(lhs);
  a.op = op;
  a.rhs = std::move(other);
  return a;
}

Atom Atom::null_test(ColumnRef lhs, bool negated) {
  Atom a;
  a.lhs = std::move(lhs);
  a.op = negated ? CompareOp::IsNotNull : CompareOp::IsNull;
  return a;
}

namespace {

constexpr std::array kReserved = {
    "select", "from",  "where", "and",   "or",     "not",     "is",    "null",  "group",
    "order",  "by",    "having", "limit", "join",  "inner",   "left",  "right", "outer",
    "cross",  "on",    "as",    "union", "distinct", "in",    "like",  "between", "exists",
    "case",   "offset", "natural", "full", "using",  "intersect", "except"};

bool is_reserved(std::string_view word) {
  std::string lower = lowercase(word);
  return std::find(kReserved.begin(), kReserved.end(), lower) != kReserved.end();
}

enum class Tok { Ident, QuotedIdent, Number, String, Symbol, End };

struct Token {
  Tok kind;
  std::string text;  // identifier/literal payload or symbol spelling
  std::size_t pos;
};

[[noreturn]] void syntax_error(std::size_t pos, const std::string& expected, const std::string& found) {
  std::ostringstream msg;
  msg << "syntax error at position " << pos << ": expected " << expected << ", found " << found;
  Error err(ErrorCode::ParseError, msg.str());
  err.position = pos;
  err.expected = expected;
  throw err;
}

[[noreturn]] void unsupported(std::size_t pos, const std::string& what) {
  Error err(ErrorCode::Unsupported, "unsupported construct at position " + std::to_string(pos) + ": " + what);
  err.position = pos;
  throw err;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      if (i < s.size() && ident_char(s[i])) syntax_error(i, "end of number", std::string(1, s[i]));
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
    } else if (c == '\'' || c == '"') {
      std::string payload;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == c) {
          if (i + 1 < s.size() && s[i + 1] == c) {
            payload.push_back(c);
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        payload.push_back(s[i++]);
      }
      if (!closed) syntax_error(s.size(), std::string("closing ") + c, "end of input");
      if (c == '"' && payload.empty()) syntax_error(start, "non-empty quoted identifier", "\"\"");
      out.push_back({c == '\'' ? Tok::String : Tok::QuotedIdent, std::move(payload), start});
    } else {
      std::string sym(1, c);
      if (i + 1 < s.size()) {
        std::string two(s.substr(i, 2));
        if (two == "<=" || two == ">=" || two == "<>" || two == "!=") sym = two;
      }
      if (sym == "!") syntax_error(i, "!=", "!");
      static const std::string kSingles = ",.*();<>=-+/%|";
      if (sym.size() == 1 && kSingles.find(c) == std::string::npos)
        syntax_error(i, "a token", std::string("'") + c + "'");
      i += sym.size();
      out.push_back({Tok::Symbol, std::move(sym), start});
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string literal";
    case Tok::Number: return "number " + t.text;
    case Tok::QuotedIdent: return "identifier \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  QueryAst parse_query() {
    QueryAst ast;
    expect_keyword("SELECT");
    if (at_keyword("DISTINCT")) unsupported(peek().pos, "DISTINCT");
    if (at_symbol("*")) {
      advance();
    } else {
      std::vector<ColumnRef> cols;
      do {
        cols.push_back(parse_select_item());
      } while (accept_symbol(","));
      ast.select = std::move(cols);
    }
    expect_keyword("FROM");
    do {
      if (at_symbol("(")) unsupported(peek().pos, "subquery in FROM");
      std::size_t pos = peek().pos;
      std::string name = expect_name("table name");
      for (const auto& existing : ast.from)
        if (iequals(existing, name)) syntax_error(pos, "distinct table names", "duplicate table " + name);
      ast.from.push_back(std::move(name));
      if (at_keyword("AS") || peek().kind == Tok::QuotedIdent ||
          (peek().kind == Tok::Ident && !is_reserved(peek().text)))
        unsupported(peek().pos, "table alias");
      if (at_keyword("JOIN") || at_keyword("INNER") || at_keyword("LEFT") || at_keyword("RIGHT") ||
          at_keyword("CROSS") || at_keyword("NATURAL") || at_keyword("FULL"))
        unsupported(peek().pos, "JOIN syntax (use comma joins)");
    } while (accept_symbol(","));

    if (accept_keyword("WHERE")) {
      ast.where.push_back(parse_condition());
      while (true) {
        if (accept_keyword("AND")) {
          ast.where.push_back(parse_condition());
        } else if (at_keyword("OR")) {
          unsupported(peek().pos, "OR");
        } else {
          break;
        }
      }
    }

    for (const char* kw : {"GROUP", "ORDER", "HAVING", "LIMIT", "UNION", "INTERSECT", "EXCEPT", "OFFSET"})
      if (at_keyword(kw)) unsupported(peek().pos, std::string(kw));
    accept_symbol(";");
    if (peek().kind != Tok::End) syntax_error(peek().pos, "end of input", describe(peek()));
    return ast;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(idx_ + ahead, toks_.size() - 1)]; }
  const Token& advance() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }

  bool at_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && iequals(t.text, kw);
  }
  bool at_symbol(std::string_view sym, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Symbol && t.text == sym;
  }
  bool accept_keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    advance();
    return true;
  }
  bool accept_symbol(std::string_view sym) {
    if (!at_symbol(sym)) return false;
    advance();
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) syntax_error(peek().pos, std::string(kw), describe(peek()));
  }
  void expect_symbol(std::string_view sym) {
    if (!accept_symbol(sym)) syntax_error(peek().pos, "'" + std::string(sym) + "'", describe(peek()));
  }

  std::string expect_name(const std::string& what) {
    const Token& t = peek();
    if (t.kind == Tok::QuotedIdent || (t.kind == Tok::Ident && !is_reserved(t.text))) {
      advance();
      return t.text;
    }
    syntax_error(t.pos, what, describe(t));
  }

  ColumnRef parse_column_ref() {
    ColumnRef ref;
    std::string first = expect_name("column name");
    if (at_symbol("(")) unsupported(peek().pos, "function call or aggregate " + first + "(...)");
    if (accept_symbol(".")) {
      ref.qualifier = std::move(first);
      ref.column = expect_name("column name");
    } else {
      ref.column = std::move(first);
    }
    return ref;
  }

  ColumnRef parse_select_item() {
    if (at_symbol("*")) unsupported(peek().pos, "mixed * and column list");
    ColumnRef ref = parse_column_ref();
    if (at_keyword("AS") || peek().kind == Tok::QuotedIdent ||
        (peek().kind == Tok::Ident && !is_reserved(peek().text)))
      unsupported(peek().pos, "column alias");
    if (peek().kind == Tok::Symbol && std::string("+-/%|").find(peek().text[0]) != std::string::npos)
      unsupported(peek().pos, "expressions in select list");
    return ref;
  }

  Atom parse_condition() {
    if (at_keyword("NOT")) unsupported(peek().pos, "NOT");
    if (at_symbol("(")) {
      std::size_t open = peek().pos;
      if (at_keyword("SELECT", 1)) unsupported(peek(1).pos, "subquery");
      advance();
      Atom first = parse_atom();
      if (accept_symbol(")")) return first;
      if (!at_keyword("OR")) syntax_error(peek().pos, "')'", describe(peek()));
      advance();
      // Only (col IS NULL OR col op rhs) is accepted.
      Atom second = parse_atom();
      expect_symbol(")");
      if (first.op != CompareOp::IsNull || is_null_test(second.op) ||
          !iequals(render(first.lhs), render(second.lhs)))
        unsupported(open, "parenthesized disjunction (only '(col IS NULL OR col op value)' is allowed)");
      second.lhs = first.lhs;
      second.or_null = true;
      return second;
    }
    return parse_atom();
  }

  Atom parse_atom() {
    ColumnRef lhs = parse_column_ref();
    if (accept_keyword("IS")) {
      bool negated = accept_keyword("NOT");
      expect_keyword("NULL");
      return Atom::null_test(std::move(lhs), negated);
    }
    for (const char* kw : {"LIKE", "IN", "BETWEEN", "NOT"})
      if (at_keyword(kw)) unsupported(peek().pos, kw);
    const Token& t = peek();
    CompareOp op;
    if (t.kind != Tok::Symbol) syntax_error(t.pos, "comparison operator", describe(t));
    if (t.text == "<") op = CompareOp::Lt;
    else if (t.text == ">") op = CompareOp::Gt;
    else if (t.text == "<=") op = CompareOp::Le;
    else if (t.text == ">=") op = CompareOp::Ge;
    else if (t.text == "=") op = CompareOp::Eq;
    else if (t.text == "<>" || t.text == "!=") op = CompareOp::Ne;
    else syntax_error(t.pos, "comparison operator", describe(t));
    advance();

    const Token& v = peek();
    if (v.kind == Tok::String) {
      advance();
      return Atom::compare(std::move(lhs), op, SqlValue::text(v.text));
    }
    if (v.kind == Tok::Number || (at_symbol("-") && peek(1).kind == Tok::Number)) {
      std::size_t pos = v.pos;
      std::string spelled;
      if (at_symbol("-")) {
        advance();
        spelled = "-";
      }
      spelled += advance().text;
      auto num = parse_number(spelled);
      if (!num) syntax_error(pos, "number", spelled);
      return Atom::compare(std::move(lhs), op, SqlValue::number(*num));
    }
    if (at_keyword("NULL")) {
      advance();
      return Atom::compare(std::move(lhs), op, SqlValue::null());
    }
    if (at_symbol("(") && at_keyword("SELECT", 1)) unsupported(v.pos, "subquery");
    if (v.kind == Tok::Ident || v.kind == Tok::QuotedIdent) {
      ColumnRef rhs = parse_column_ref();
      return Atom::compare(std::move(lhs), op, std::move(rhs));
    }
    syntax_error(v.pos, "literal or column", describe(v));
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

std::string render_name(const std::string& name) {
  bool bare = !name.empty() && ident_start(name[0]) &&
              std::all_of(name.begin(), name.end(), ident_char) && !is_reserved(name);
  if (bare) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

QueryAst parse(std::string_view text) { return Parser(text).parse_query(); }

std::string render(const ColumnRef& ref) {
  if (ref.qualifier) return render_name(*ref.qualifier) + "." + render_name(ref.column);
  return render_name(ref.column);
}

std::string render(const SqlValue& value) {
  if (value.is_null()) return "NULL";
  if (value.is_number()) return format_number(value.as_number());
  std::string out = "'";
  for (char c : value.as_text()) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string render(const Atom& atom) {
  std::string core = render(atom.lhs) + " " + op_symbol(atom.op);
  if (const auto* col = std::get_if<ColumnRef>(&atom.rhs)) core += " " + render(*col);
  if (const auto* val = std::get_if<SqlValue>(&atom.rhs)) core += " " + render(*val);
  if (atom.or_null) return "(" + render(atom.lhs) + " IS NULL OR " + core + ")";
  return core;
}

std::string render(const QueryAst& ast) {
  std::string out = "SELECT ";
  if (ast.is_star()) {
    out += "*";
  } else {
    for (std::size_t i = 0; i < ast.select->size(); ++i) {
      if (i) out += ", ";
      out += render((*ast.select)[i]);
    }
  }
  out += " FROM ";
  for (std::size_t i = 0; i < ast.from.size(); ++i) {
    if (i) out += ", ";
    out += render_name(ast.from[i]);
  }
  if (!ast.where.empty()) {
    out += " WHERE ";
    for (std::size_t i = 0; i < ast.where.size(); ++i) {
      if (i) out += " AND ";
      out += render(ast.where[i]);
    }
  }
  return out;
}

QueryAst strip_projection(const QueryAst& ast) {
  QueryAst out = ast;
  out.select.reset();
  return out;
}

QueryAst inject(const QueryAst& ast, const Conjunction& c) {
  if (c.empty()) throw Error(ErrorCode::EmptyConjunction, "cannot inject an empty conjunction");
  QueryAst out = ast;
  out.where.insert(out.where.end(), c.begin(), c.end());
  return out;
}

void ValidationReport::require_ok() const {
  if (!issues.empty()) throw Error(issues.front().code, issues.front().message);
}

namespace {

struct Resolver {
  const QueryAst& ast;
  const DatabaseSchema& schema;
  ValidationReport& report;

  // Returns the column's schema, or nullptr after recording an issue.
  const ColumnSchema* resolve(const ColumnRef& ref) {
    const ColumnSchema* found = nullptr;
    int hits = 0;
    for (const auto& table : ast.from) {
      if (ref.qualifier && !iequals(*ref.qualifier, table)) continue;
      auto it = schema.find(table);
      if (it == schema.end()) continue;
      for (const auto& col : it->second) {
        if (iequals(col.name, ref.column)) {
          found = &col;
          ++hits;
        }
      }
    }
    if (ref.qualifier && std::none_of(ast.from.begin(), ast.from.end(),
                                      [&](const std::string& t) { return iequals(t, *ref.qualifier); })) {
      report.issues.push_back({ErrorCode::UnknownTable, "qualifier " + *ref.qualifier + " is not in FROM"});
      return nullptr;
    }
    if (hits == 0) {
      report.issues.push_back({ErrorCode::UnknownColumn, "unknown column " + render(ref)});
      return nullptr;
    }
    if (hits > 1) {
      report.issues.push_back({ErrorCode::AmbiguousColumn, "ambiguous column " + render(ref)});
      return nullptr;
    }
    return found;
  }
};

}  // namespace

ValidationReport validate_completable(const QueryAst& ast, const DatabaseSchema& schema) {
  ValidationReport report;
  bool tables_ok = true;
  for (const auto& table : ast.from) {
    if (schema.find(table) == schema.end()) {
      report.issues.push_back({ErrorCode::UnknownTable, "unknown table " + table});
      tables_ok = false;
    }
  }
  if (ast.from.empty()) report.issues.push_back({ErrorCode::ParseError, "FROM list is empty"});
  if (!tables_ok) return report;

  Resolver r{ast, schema, report};
  if (ast.select)
    for (const auto& ref : *ast.select) r.resolve(ref);

  for (const auto& atom : ast.where) {
    const ColumnSchema* lhs = r.resolve(atom.lhs);
    if (is_null_test(atom.op) != !atom.has_rhs()) {
      report.issues.push_back({ErrorCode::ParseError, "malformed atom " + render(atom)});
      continue;
    }
    if (const auto* col = std::get_if<ColumnRef>(&atom.rhs)) {
      const ColumnSchema* rhs = r.resolve(*col);
      if (lhs && rhs && lhs->type != rhs->type)
        report.issues.push_back({ErrorCode::TypeMismatch, "cannot compare " + std::string(type_name(lhs->type)) +
                                                              " with " + type_name(rhs->type) + " in " + render(atom)});
    } else if (const auto* val = std::get_if<SqlValue>(&atom.rhs)) {
      if (!lhs || val->is_null()) continue;
      bool numeric_val = val->is_number();
      if (numeric_val != (lhs->type == ColumnType::Numeric))
        report.issues.push_back({ErrorCode::TypeMismatch, "cannot compare " + std::string(type_name(lhs->type)) +
                                                              " column with " + (numeric_val ? "number" : "text") +
                                                              " in " + render(atom)});
    }
  }
  return report;
}

}  // namespace qcomplete
