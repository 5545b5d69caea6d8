#include "core/schema.hpp"

#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace fragmap {

const Relation& SchemaGraph::relation(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end())
    fail(ErrorCode::UnknownElement, "unknown relation '" + name + "'");
  return it->second;
}

const Attribute& SchemaGraph::attribute(const std::string& qualified) const {
  auto it = attributes_.find(qualified);
  if (it == attributes_.end())
    fail(ErrorCode::UnknownElement, "unknown attribute '" + qualified + "'");
  return it->second;
}

std::vector<std::pair<std::string, std::string>> SchemaGraph::fk_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, attr] : attributes_)
    if (attr.role == AttributeRole::ForeignKey)
      out.emplace_back(name, attr.fk_target);
  return out;
}

const Attribute& SchemaGraph::paired_attribute(const std::string& qualified) const {
  const Attribute& attr = attribute(qualified);
  if (attr.role != AttributeRole::Plain)
    fail(ErrorCode::NotPlainAttribute,
         "'" + qualified + "' is a key attribute and has no pairing");
  return attribute(attr.paired);
}

// Format, one relation block per `relation <name>` line, attributes indented:
//   relation author
//     aid numeric pk
//     name text
//     oid numeric fk organization.oid
//   relation position
//     aid numeric fk author.aid
//     name text paired author.name
SchemaGraph SchemaGraph::load_text(const std::string& text) {
  SchemaGraph g;
  std::istringstream in(text);
  std::string line;
  std::string current;  // relation being filled
  size_t lineno = 0;
  // pending (attribute, target) links resolved after everything is declared
  std::vector<std::pair<std::string, std::string>> fk_links, paired_links;

  while (std::getline(in, line)) {
    ++lineno;
    std::string at = "schema line " + std::to_string(lineno);
    std::string t = trim(line);
    if (t.empty() || starts_with(t, "#")) continue;
    std::vector<std::string> fields = split_ws(to_lower(t));
    if (fields[0] == "relation") {
      if (fields.size() != 2)
        fail(ErrorCode::FormatError, at + ": expected 'relation <name>'");
      current = fields[1];
      if (!g.relations_.emplace(current, Relation{current, {}, ""}).second)
        fail(ErrorCode::FormatError, at + ": duplicate relation '" + current + "'");
      continue;
    }
    if (current.empty())
      fail(ErrorCode::FormatError, at + ": attribute before any relation");

    // <name> <text|numeric> [pk] [fk <rel.attr>] [paired <rel.attr>]
    if (fields.size() < 2)
      fail(ErrorCode::FormatError, at + ": expected '<name> <type> ...'");
    Attribute attr;
    attr.relation = current;
    attr.name = fields[0];
    if (fields[1] == "text") attr.type = AttributeType::Text;
    else if (fields[1] == "numeric") attr.type = AttributeType::Numeric;
    else fail(ErrorCode::FormatError, at + ": unknown type '" + fields[1] + "'");

    size_t i = 2;
    while (i < fields.size()) {
      if (fields[i] == "pk") {
        attr.role = AttributeRole::PrimaryKey;
        i += 1;
      } else if (fields[i] == "fk" && i + 1 < fields.size()) {
        attr.role = AttributeRole::ForeignKey;
        fk_links.emplace_back(attr.qualified(), fields[i + 1]);
        i += 2;
      } else if (fields[i] == "paired" && i + 1 < fields.size()) {
        paired_links.emplace_back(attr.qualified(), fields[i + 1]);
        i += 2;
      } else {
        fail(ErrorCode::FormatError, at + ": unrecognized marker '" + fields[i] + "'");
      }
    }

    Relation& rel = g.relations_[current];
    if (!g.attributes_.emplace(attr.qualified(), attr).second)
      fail(ErrorCode::FormatError, at + ": duplicate attribute '" + attr.qualified() + "'");
    rel.attributes.push_back(attr.name);
    if (attr.role == AttributeRole::PrimaryKey && rel.primary_key.empty())
      rel.primary_key = attr.name;
  }

  if (g.relations_.empty())
    fail(ErrorCode::FormatError, "schema declares no relations");

  for (const auto& [source, target] : fk_links) {
    auto it = g.attributes_.find(target);
    if (it == g.attributes_.end())
      fail(ErrorCode::FormatError,
           "foreign key '" + source + "' references unknown '" + target + "'");
    if (it->second.role != AttributeRole::PrimaryKey)
      fail(ErrorCode::FormatError,
           "foreign key '" + source + "' must reference a primary key, not '" +
               target + "'");
    g.attributes_[source].fk_target = target;
  }
  for (const auto& [source, target] : paired_links) {
    if (!g.attributes_.count(target))
      fail(ErrorCode::FormatError,
           "pairing for '" + source + "' references unknown '" + target + "'");
    g.attributes_[source].paired = target;
  }

  // Default pairing: the relation's primary key. A plain attribute that ends
  // up with no pairing at all is a declaration error.
  for (auto& [name, attr] : g.attributes_) {
    if (attr.role != AttributeRole::Plain || !attr.paired.empty()) continue;
    const Relation& rel = g.relations_[attr.relation];
    if (rel.primary_key.empty())
      fail(ErrorCode::MissingPrimaryKey,
           "'" + name + "' needs an explicit pairing: relation '" +
               attr.relation + "' has no primary key");
    attr.paired = attr.relation + "." + rel.primary_key;
  }
  return g;
}

SchemaGraph SchemaGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_text(buf.str());
}

}  // namespace fragmap
