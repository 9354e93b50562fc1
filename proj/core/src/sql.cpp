#include "sqlcorpus/sql.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace sqlcorpus {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

constexpr std::array<std::string_view, 20> kGrammarKeywords{
    "SELECT", "FROM", "JOIN", "ON", "WHERE", "AND", "ORDER", "BY", "ASC", "DESC",
    "AS", "LIKE", "COUNT", "SUM", "AVG", "MIN", "MAX", "TRUE", "FALSE", "NULL"};

// Recognized SQL that the grammar deliberately leaves out.
constexpr std::array<std::string_view, 36> kUnsupportedKeywords{
    "GROUP", "HAVING", "LIMIT", "OFFSET", "UNION", "INTERSECT", "EXCEPT", "DISTINCT", "INNER",
    "LEFT", "RIGHT", "FULL", "CROSS", "OUTER", "NATURAL", "OR", "NOT", "IN", "BETWEEN",
    "IS", "EXISTS", "CASE", "WITH", "INSERT", "UPDATE", "DELETE", "DROP", "CREATE", "VALUES",
    "INTO", "SET", "FETCH", "TOP", "OVER", "USING", "ALL"};

bool contains(auto const& list, std::string_view word) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

std::string clause_name(const std::string& keyword) {
  if (keyword == "GROUP") return "GROUP BY";
  return keyword;
}

enum class TokKind { Word, Number, String, Punct, End };

struct Token {
  TokKind kind;
  std::string text;  // string tokens hold the unquoted value
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({TokKind::Word, std::string(src.substr(start, i - start)), start});
    } else if (is_digit(c) || (c == '-' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      ++i;
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i + 1 < src.size() && src[i] == '.' && is_digit(src[i + 1])) {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      out.push_back({TokKind::Number, std::string(src.substr(start, i - start)), start});
    } else if (c == '\'') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < src.size()) {
        if (src[i] == '\'') {
          if (i + 1 < src.size() && src[i + 1] == '\'') {
            value += '\'';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        value += src[i++];
      }
      if (!closed) throw ParseError("unterminated string literal", start, {"'"});
      out.push_back({TokKind::String, std::move(value), start});
    } else {
      static constexpr std::array<std::string_view, 4> two{"<=", ">=", "<>", "!="};
      std::string_view rest = src.substr(i);
      auto it = std::find_if(two.begin(), two.end(), [&](std::string_view p) { return rest.starts_with(p); });
      if (it != two.end()) {
        out.push_back({TokKind::Punct, std::string(*it), start});
        i += 2;
      } else if (std::string_view(",().=<>;*").find(c) != std::string_view::npos) {
        out.push_back({TokKind::Punct, std::string(1, c), start});
        ++i;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", start, {});
      }
    }
  }
  out.push_back({TokKind::End, "", src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  SqlQuery parse() {
    SqlQuery q;
    expect_keyword("SELECT");
    check_unsupported();
    q.select.push_back(parse_item());
    while (accept_punct(",")) q.select.push_back(parse_item());
    expect_keyword("FROM");
    q.table = expect_identifier("table name");

    if (accept_keyword("JOIN")) {
      JoinClause join;
      join.right_table = expect_identifier("table name");
      expect_keyword("ON");
      auto [lq, lk] = qualified();
      expect_punct("=");
      auto [rq, rk] = qualified();
      if (lq == q.table && rq == join.right_table) {
        join.left_key = lk;
        join.right_key = rk;
      } else if (rq == q.table && lq == join.right_table) {
        join.left_key = rk;
        join.right_key = lk;
      } else {
        throw ParseError("join condition must relate " + q.table + " and " + join.right_table,
                         peek().pos, {q.table, join.right_table});
      }
      q.join = std::move(join);
    }
    check_unsupported();

    if (accept_keyword("WHERE")) {
      q.filters.push_back(parse_filter());
      while (true) {
        check_unsupported();
        if (!accept_keyword("AND")) break;
        q.filters.push_back(parse_filter());
      }
    }
    check_unsupported();

    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      q.order_by.push_back(parse_key());
      while (accept_punct(",")) q.order_by.push_back(parse_key());
    }
    check_unsupported();

    if (peek().kind != TokKind::End) {
      if (peek().kind == TokKind::Punct && peek().text == ";") {
        throw ParseError("statement terminators and sequences are not supported", peek().pos, {"end of input"});
      }
      throw ParseError("unexpected '" + peek().text + "'", peek().pos,
                       {"JOIN", "WHERE", "AND", "ORDER BY", ",", "end of input"});
    }
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool is_keyword(const Token& t, std::string_view kw) const {
    return t.kind == TokKind::Word && upper(t.text) == kw;
  }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) return false;
    advance();
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) {
      throw ParseError("expected " + std::string(kw), peek().pos, {std::string(kw)});
    }
  }
  bool accept_punct(std::string_view p) {
    if (peek().kind != TokKind::Punct || peek().text != p) return false;
    advance();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) {
      throw ParseError("expected '" + std::string(p) + "'", peek().pos, {std::string(p)});
    }
  }

  void check_unsupported() const {
    const Token& t = peek();
    if (t.kind == TokKind::Word) {
      std::string kw = upper(t.text);
      if (contains(kUnsupportedKeywords, kw)) throw UnknownClause(clause_name(kw), t.pos);
    }
  }

  std::string expect_identifier(const char* what) {
    check_unsupported();
    const Token& t = peek();
    if (t.kind == TokKind::Word && is_identifier(t.text)) return advance().text;
    if (t.kind == TokKind::Punct && t.text == "(" && is_keyword(peek(1), "SELECT")) {
      throw UnknownClause("subquery", t.pos);
    }
    throw ParseError(std::string("expected ") + what, t.pos, {"identifier"});
  }

  std::pair<std::string, std::string> qualified() {
    std::string qualifier = expect_identifier("table name");
    expect_punct(".");
    return {qualifier, expect_identifier("field name")};
  }

  SelectItem parse_item() {
    const Token& t = peek();
    if (t.kind == TokKind::Punct && t.text == "*") {
      throw ParseError("'*' is not supported; list the fields", t.pos, {"identifier", "aggregate"});
    }
    SelectItem item;
    auto agg = t.kind == TokKind::Word ? parse_aggregate(t.text) : std::nullopt;
    if (agg && peek(1).kind == TokKind::Punct && peek(1).text == "(") {
      advance();
      advance();
      if (is_keyword(peek(), "SELECT")) throw UnknownClause("subquery", peek().pos);
      if (is_keyword(peek(), "DISTINCT")) throw UnknownClause("DISTINCT", peek().pos);
      item.aggregate = *agg;
      item.field = expect_identifier("field name");
      expect_punct(")");
    } else {
      item.field = expect_identifier("field name");
    }
    if (accept_keyword("AS")) item.alias = expect_identifier("alias");
    return item;
  }

  WhereFilter parse_filter() {
    WhereFilter f;
    f.field = expect_identifier("field name");
    check_unsupported();
    const Token& op = peek();
    if (is_keyword(op, "LIKE")) {
      advance();
      f.op = CompareOp::Like;
      if (peek().kind != TokKind::String) throw ParseError("LIKE needs a string pattern", peek().pos, {"string"});
      f.value = Literal::string(advance().text);
      return f;
    }
    if (op.kind != TokKind::Punct) {
      throw ParseError("expected comparison operator", op.pos, {"=", "<", ">", "<=", ">=", "LIKE"});
    }
    if (op.text == "<>" || op.text == "!=") throw UnknownClause(op.text, op.pos);
    if (op.text == "=") f.op = CompareOp::Eq;
    else if (op.text == "<") f.op = CompareOp::Lt;
    else if (op.text == ">") f.op = CompareOp::Gt;
    else if (op.text == "<=") f.op = CompareOp::Le;
    else if (op.text == ">=") f.op = CompareOp::Ge;
    else throw ParseError("expected comparison operator", op.pos, {"=", "<", ">", "<=", ">=", "LIKE"});
    advance();

    const Token& lit = peek();
    if (lit.kind == TokKind::Number) {
      f.value = Literal::number(advance().text);
    } else if (lit.kind == TokKind::String) {
      f.value = Literal::string(advance().text);
    } else if (is_keyword(lit, "TRUE") || is_keyword(lit, "FALSE")) {
      f.value = Literal::boolean(is_keyword(lit, "TRUE"));
      advance();
    } else {
      check_unsupported();
      if (lit.kind == TokKind::Punct && lit.text == "(") throw UnknownClause("subquery", lit.pos);
      throw ParseError("expected literal", lit.pos, {"number", "string", "TRUE", "FALSE"});
    }
    return f;
  }

  OrderKey parse_key() {
    OrderKey key;
    key.field = expect_identifier("field name");
    if (accept_keyword("DESC")) {
      key.direction = Direction::Desc;
    } else {
      accept_keyword("ASC");
      key.direction = Direction::Asc;
    }
    return key;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (const auto& e : expected) {
    if (!out.empty()) out += ", ";
    out += e;
  }
  return out;
}

}  // namespace

std::string_view to_string(Direction dir) { return dir == Direction::Asc ? "ASC" : "DESC"; }

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Like: return "LIKE";
  }
  return "?";
}

SelectItem SelectItem::bare(std::string field) { return {std::move(field), Aggregate::None, std::nullopt}; }

SelectItem SelectItem::aggregated(std::string field, Aggregate agg) {
  if (agg == Aggregate::None) return bare(std::move(field));
  std::string alias = derive_alias(agg, field);
  return {std::move(field), agg, std::move(alias)};
}

std::string derive_alias(Aggregate agg, std::string_view field) {
  return std::string(to_string(agg)) + "_" + std::string(field);
}

std::string Literal::sql() const {
  if (kind != Kind::String) return text;
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

std::string render_sql(const SqlQuery& q, SqlLayout* layout) {
  std::string out = "SELECT ";
  if (layout) *layout = SqlLayout{};
  for (std::size_t i = 0; i < q.select.size(); ++i) {
    const auto& item = q.select[i];
    if (i) out += ", ";
    if (item.aggregate != Aggregate::None) {
      if (layout) layout->select_aggregate.push_back(out.size());
      out += to_string(item.aggregate);
      out += '(';
      if (layout) layout->select_field.push_back(out.size());
      out += item.field;
      out += ')';
    } else {
      if (layout) {
        layout->select_aggregate.push_back(std::string::npos);
        layout->select_field.push_back(out.size());
      }
      out += item.field;
    }
    if (item.alias) out += " AS " + *item.alias;
  }
  out += " FROM ";
  if (layout) layout->table = out.size();
  out += q.table;
  if (q.join) {
    out += " JOIN " + q.join->right_table + " ON " + q.table + "." + q.join->left_key + " = " +
           q.join->right_table + "." + q.join->right_key;
  }
  for (std::size_t i = 0; i < q.filters.size(); ++i) {
    const auto& f = q.filters[i];
    out += i ? " AND " : " WHERE ";
    out += f.field;
    out += ' ';
    out += to_string(f.op);
    out += ' ';
    out += f.value.sql();
  }
  for (std::size_t i = 0; i < q.order_by.size(); ++i) {
    out += i ? ", " : " ORDER BY ";
    if (layout) layout->order_field.push_back(out.size());
    out += q.order_by[i].field;
    out += ' ';
    if (layout) layout->order_direction.push_back(out.size());
    out += to_string(q.order_by[i].direction);
  }
  return out;
}

ParseError::ParseError(std::string message, std::size_t position, std::vector<std::string> expected)
    : Error("parse error at " + std::to_string(position) + ": " + message +
            (expected.empty() ? "" : " (expected: " + join_expected(expected) + ")")),
      position_(position),
      expected_(std::move(expected)) {}

UnknownClause::UnknownClause(std::string clause, std::size_t position)
    : ParseError(clause + " is outside the supported grammar", position, {}), clause_(std::move(clause)) {}

SqlQuery parse_sql(std::string_view text) { return Parser(text).parse(); }

bool is_reserved_word(std::string_view word) {
  const std::string u = upper(word);
  return contains(kGrammarKeywords, u) || contains(kUnsupportedKeywords, u) || u == "TABLE" ||
         u == "ANY";
}

bool is_identifier(std::string_view word) {
  if (word.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(word[0])) && word[0] != '_') return false;
  for (char c : word) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return !is_reserved_word(word);
}

}  // namespace sqlcorpus
