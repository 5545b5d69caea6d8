#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fragmap {

enum class AttributeRole { Plain, PrimaryKey, ForeignKey };
enum class AttributeType { Text, Numeric };

struct Attribute {
  std::string relation;
  std::string name;
  AttributeType type = AttributeType::Text;
  AttributeRole role = AttributeRole::Plain;
  std::string fk_target;  // qualified "relation.attribute"; FK only
  std::string paired;     // qualified; every plain attribute gets one

  std::string qualified() const { return relation + "." + name; }
};

struct Relation {
  std::string name;
  std::vector<std::string> attributes;  // declaration order, unqualified
  std::string primary_key;              // unqualified; may be empty
};

// Relations, attributes, and the FK->PK references between them, as declared
// in a schema file. Names are lowercase; attribute lookups are by qualified
// name ("author.name").
class SchemaGraph {
 public:
  const std::map<std::string, Relation>& relations() const { return relations_; }
  const std::map<std::string, Attribute>& attributes() const { return attributes_; }

  bool has_relation(const std::string& name) const { return relations_.count(name) > 0; }
  const Relation& relation(const std::string& name) const;
  bool has_attribute(const std::string& qualified) const { return attributes_.count(qualified) > 0; }
  const Attribute& attribute(const std::string& qualified) const;

  // All FK->PK references as (fk qualified, pk qualified), sorted.
  std::vector<std::pair<std::string, std::string>> fk_edges() const;

  // The projection partner of a plain attribute (declared pairing or the
  // relation's primary key). Key attributes have no pairing.
  const Attribute& paired_attribute(const std::string& qualified) const;

  static SchemaGraph load_text(const std::string& text);
  static SchemaGraph load_file(const std::string& path);

 private:
  std::map<std::string, Relation> relations_;
  std::map<std::string, Attribute> attributes_;
};

}  // namespace fragmap
