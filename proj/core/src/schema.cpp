#include "sqlcorpus/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace sqlcorpus {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::CS1: return "CS1";
    case Level::CS2: return "CS2";
    case Level::CS3: return "CS3";
    case Level::CS4: return "CS4";
    case Level::CS5: return "CS5";
  }
  return "?";
}

std::optional<Level> parse_level(std::string_view text) {
  if (text.size() == 3 && (text[0] == 'c' || text[0] == 'C') && (text[1] == 's' || text[1] == 'S')) {
    text.remove_prefix(2);
  }
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '5') return static_cast<Level>(text[0] - '0');
  return std::nullopt;
}

const ColumnDef* TableDef::find(std::string_view column) const {
  auto it = std::find_if(columns.begin(), columns.end(), [&](const ColumnDef& c) { return c.name == column; });
  return it == columns.end() ? nullptr : &*it;
}

namespace {

TableDef gen_table(const VocabPool& pool, const std::string& name, Rng& rng, const TableDef* other) {
  TableDef table{name, {}};
  const auto& eligible = pool.eligible_fields(name);
  const int count = rng.uniform_int(kMinColumns, kMaxColumns);
  for (std::size_t pick : rng.sample(eligible.size(), static_cast<std::size_t>(count))) {
    const FieldEntry& field = pool.fields()[eligible[pick]];
    const ColumnDef* shared = other ? other->find(field.canonical_name) : nullptr;
    SqlType type = shared ? shared->type : rng.pick(field.allowed_types);
    table.columns.push_back({field.canonical_name, std::move(type)});
  }
  return table;
}

}  // namespace

SchemaContext gen_schema(const VocabPool& pool, Level level, Rng& rng) {
  SchemaContext schema;
  schema.level = level;
  const auto& tables = pool.tables();
  const std::size_t main_index = rng.index(tables.size());
  schema.main_table = gen_table(pool, tables[main_index].canonical_name, rng, nullptr);
  if (level == Level::CS5) {
    std::size_t join_index = rng.index(tables.size() - 1);
    if (join_index >= main_index) ++join_index;
    schema.join_table = gen_table(pool, tables[join_index].canonical_name, rng, &schema.main_table);
  }
  return schema;
}

void check_schema(const SchemaContext& schema) {
  auto check_table = [](const TableDef& t) {
    if (!is_identifier(t.name)) throw Error("invalid table name '" + t.name + "'");
    if (t.columns.size() < kMinColumns || t.columns.size() > kMaxColumns) {
      throw Error("table '" + t.name + "' has " + std::to_string(t.columns.size()) + " columns");
    }
    std::set<std::string> seen;
    for (const auto& c : t.columns) {
      if (!is_identifier(c.name)) throw Error("invalid column name '" + c.name + "'");
      if (!seen.insert(c.name).second) throw Error("duplicate column '" + c.name + "' in " + t.name);
    }
  };
  check_table(schema.main_table);
  if (schema.join_table) {
    if (schema.level != Level::CS5) throw Error("join table outside CS5");
    check_table(*schema.join_table);
    if (schema.join_table->name == schema.main_table.name) throw Error("join table repeats main table");
  }
}

std::string render_create_table(const SchemaContext& schema, ContextLayout* layout) {
  std::string out;
  auto render = [&](const TableDef& t, Span* name, std::vector<Span>* columns) {
    out += "CREATE TABLE ";
    if (name) name->start = out.size();
    out += t.name;
    if (name) name->end = out.size();
    out += " ( ";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (i) out += ", ";
      if (columns) columns->push_back({out.size(), out.size() + t.columns[i].name.size()});
      out += t.columns[i].name;
      out += ' ';
      out += t.columns[i].type.str();
    }
    out += " )";
  };
  if (layout) *layout = ContextLayout{};
  render(schema.main_table, layout ? &layout->main_name : nullptr, layout ? &layout->main_columns : nullptr);
  if (schema.join_table) {
    out += ' ';
    Span join_name;
    render(*schema.join_table, layout ? &join_name : nullptr, layout ? &layout->join_columns : nullptr);
    if (layout) layout->join_name = join_name;
  }
  return out;
}

namespace {

class CreateParser {
 public:
  explicit CreateParser(std::string_view src) : src_(src) {}

  SchemaContext parse() {
    SchemaContext schema;
    schema.main_table = table();
    skip_ws();
    if (pos_ < src_.size()) {
      schema.join_table = table();
      schema.level = Level::CS5;
    }
    skip_ws();
    if (pos_ < src_.size()) throw ParseError("unexpected text after CREATE TABLE", pos_, {"end of input"});
    return schema;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    if (start == pos_) throw ParseError("expected a name", pos_, {"identifier"});
    return std::string(src_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_, {std::string(1, c)});
    ++pos_;
  }

  void keyword(std::string_view kw) {
    std::size_t at = pos_;
    std::string w = word();
    std::string up;
    for (char c : w) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up != kw) throw ParseError("expected " + std::string(kw), at, {std::string(kw)});
  }

  TableDef table() {
    keyword("CREATE");
    keyword("TABLE");
    TableDef t;
    t.name = word();
    expect('(');
    while (true) {
      ColumnDef col{word(), SqlType::parse("INT")};
      skip_ws();
      std::size_t start = pos_;
      int depth = 0;
      while (pos_ < src_.size()) {
        char c = src_[pos_];
        if (c == '(') ++depth;
        if (c == ')') {
          if (depth == 0) break;
          --depth;
        }
        if (c == ',' && depth == 0) break;
        ++pos_;
      }
      try {
        col.type = SqlType::parse(src_.substr(start, pos_ - start));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), start, {"SQL type"});
      }
      t.columns.push_back(std::move(col));
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect(')');
      break;
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

SchemaContext parse_create_table(std::string_view text) { return CreateParser(text).parse(); }

InvalidQuery::InvalidQuery(std::vector<std::string> violations)
    : Error("invalid query: " + (violations.empty() ? std::string("?") : violations.front())),
      violations_(std::move(violations)) {}

std::vector<std::string> query_violations(const SqlQuery& q, const SchemaContext& schema) {
  std::vector<std::string> out;
  const TableDef& main = schema.main_table;
  if (q.table != main.name) out.push_back("query table '" + q.table + "' is not the schema's main table");
  if (q.select.empty()) out.push_back("empty select list");

  std::set<std::pair<std::string, Aggregate>> seen_items;
  for (const auto& item : q.select) {
    const ColumnDef* col = main.find(item.field);
    if (!col) {
      out.push_back("unknown select field '" + item.field + "'");
      continue;
    }
    if (!seen_items.insert({item.field, item.aggregate}).second) {
      out.push_back("duplicate select item '" + item.field + "'");
    }
    if (!aggregate_allowed(item.aggregate, col->type.base_kind())) {
      out.push_back(std::string(to_string(item.aggregate)) + " is not valid over " + col->type.str() + " field '" +
                    item.field + "'");
    }
    const bool needs_alias = item.aggregate != Aggregate::None;
    if (needs_alias != item.alias.has_value() ||
        (needs_alias && *item.alias != derive_alias(item.aggregate, item.field))) {
      out.push_back("alias of '" + item.field + "' must be " +
                    (needs_alias ? derive_alias(item.aggregate, item.field) : std::string("absent")));
    }
  }

  std::set<std::string> filter_fields;
  for (const auto& f : q.filters) {
    const ColumnDef* col = main.find(f.field);
    if (!col) {
      out.push_back("unknown filter field '" + f.field + "'");
      continue;
    }
    if (!filter_fields.insert(f.field).second) out.push_back("two filters on '" + f.field + "'");
    const BaseKind kind = col->type.base_kind();
    bool ok = false;
    switch (kind) {
      case BaseKind::Numeric:
        ok = f.op != CompareOp::Like && f.value.kind == Literal::Kind::Number;
        break;
      case BaseKind::Text:
        ok = (f.op == CompareOp::Eq || f.op == CompareOp::Like) && f.value.kind == Literal::Kind::String;
        break;
      case BaseKind::Temporal:
        ok = (f.op == CompareOp::Eq || f.op == CompareOp::Lt || f.op == CompareOp::Gt) &&
             f.value.kind == Literal::Kind::String;
        break;
      case BaseKind::Boolean:
        ok = f.op == CompareOp::Eq && f.value.kind == Literal::Kind::Boolean;
        break;
      default:
        break;
    }
    if (!ok) out.push_back("filter on '" + f.field + "' is not type-consistent with " + col->type.str());
  }
  if (q.filters.size() > 3) out.push_back("more than 3 filters");

  for (const auto& k : q.order_by) {
    if (!main.find(k.field)) out.push_back("unknown order field '" + k.field + "'");
  }

  if (q.join) {
    if (!schema.join_table || q.join->right_table != schema.join_table->name) {
      out.push_back("join table '" + q.join->right_table + "' is not in the schema");
    } else {
      const ColumnDef* left = main.find(q.join->left_key);
      const ColumnDef* right = schema.join_table->find(q.join->right_key);
      if (!left || !right) {
        out.push_back("unknown join key");
      } else if (left->type.base_kind() != right->type.base_kind()) {
        out.push_back("join keys do not share a base kind");
      }
    }
  }
  return out;
}

void check_query(const SqlQuery& query, const SchemaContext& schema) {
  auto v = query_violations(query, schema);
  if (!v.empty()) throw InvalidQuery(std::move(v));
}

}  // namespace sqlcorpus
