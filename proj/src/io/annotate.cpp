#include "jsoniq/io.hpp"

namespace jsoniq {

namespace {

[[noreturn]] void bad_schema(const std::string& message) {
  throw QueryError(ErrorCode::InvalidArgument, "invalid schema: " + message);
}

Schema parse_node(const Item& spec, const std::string& path) {
  Schema s;
  if (spec.is_string()) {
    std::string name = spec.as_string();
    if (!name.empty() && name.back() == '?') {
      s.optional = true;
      name.pop_back();
    }
    auto type = atomic_type_from_name(name);
    if (!type) bad_schema("unknown type '" + name + "' at " + path);
    s.type = *type;
    return s;
  }
  if (spec.is_object()) {
    s.kind = Schema::Kind::Object;
    for (const auto& [key, value] : spec.as_object().members()) {
      std::string field = key;
      bool optional = false;
      if (!field.empty() && field.back() == '?') {
        optional = true;
        field.pop_back();
      }
      Schema child = parse_node(value, path + "." + field);
      child.optional = child.optional || optional;
      s.fields.emplace_back(field, std::move(child));
    }
    return s;
  }
  if (spec.is_array() && spec.as_array().size() == 1) {
    s.kind = Schema::Kind::Array;
    s.element = std::make_shared<Schema>(parse_node(spec.as_array().members()[0], path + "[]"));
    return s;
  }
  bad_schema("expected a type name, an object or a one-element array at " + path);
}

[[noreturn]] void reject(std::uint64_t index, const std::string& path, const std::string& what) {
  throw QueryError(ErrorCode::AnnotateError,
                   "item " + std::to_string(index) + " at " + path + ": " + what);
}

std::string kind_name(const Schema& s) {
  switch (s.kind) {
    case Schema::Kind::Object: return "object";
    case Schema::Kind::Array: return "array";
    default: return std::string(atomic_type_name(s.type));
  }
}

bool castable_identity(const Item& value, AtomicType type) {
  switch (type) {
    case AtomicType::String: return value.is_string();
    case AtomicType::Integer: return value.is_integer();
    case AtomicType::Decimal: return value.is_decimal();
    case AtomicType::Double: return value.is_double();
    case AtomicType::Boolean: return value.is_boolean();
    case AtomicType::Null: return value.is_null();
  }
  return false;
}

Item coerce(const Item& value, const Schema& s, std::uint64_t index, const std::string& path) {
  auto mismatch = [&]() -> Item {
    reject(index, path, "expected " + kind_name(s) + ", got " +
                            std::string(item_type_name(value.type())));
  };
  switch (s.kind) {
    case Schema::Kind::Object: {
      if (!value.is_object()) return mismatch();
      std::vector<std::pair<std::string, Item>> members;
      for (const auto& [field, child] : s.fields) {
        const Item* v = value.member(field);
        if (!v) {
          if (child.optional) continue;
          reject(index, path + "." + field, "missing field");
        }
        members.emplace_back(field, coerce(*v, child, index, path + "." + field));
      }
      return Item::object(std::move(members));
    }
    case Schema::Kind::Array: {
      if (!value.is_array()) return mismatch();
      std::vector<Item> members;
      const auto& items = value.as_array().members();
      for (std::size_t i = 0; i < items.size(); ++i) {
        members.push_back(coerce(items[i], *s.element, index,
                                 path + "[" + std::to_string(i + 1) + "]"));
      }
      return Item::array(std::move(members));
    }
    case Schema::Kind::Atomic:
      break;
  }
  if (value.is_null()) return value;
  if (!value.is_atomic()) return mismatch();
  if (castable_identity(value, s.type)) return value;
  try {
    return cast_item(value, s.type);
  } catch (const QueryError& e) {
    reject(index, path, "cannot convert " + std::string(item_type_name(value.type())) + " to " +
                            kind_name(s) + ": " + e.message());
  }
}

}  // namespace

Schema parse_schema(const Item& schema) {
  if (!schema.is_object()) bad_schema("the top level must be an object");
  return parse_node(schema, "$");
}

Item annotate_item(const Item& item, const Schema& schema, std::uint64_t index) {
  return coerce(item, schema, index, "$");
}

PartitionedSequence annotate(const PartitionedSequence& in, const Schema& schema,
                             const WorkerPool& pool) {
  auto shared = std::make_shared<const Schema>(schema);
  return flat_map_positional(
      in,
      [shared]() -> PositionalMapFn {
        return [shared](const Item& item, std::uint64_t pos, const ItemSink& sink) {
          sink(annotate_item(item, *shared, pos));
        };
      },
      pool);
}

TupleFrame annotate_frame(const PartitionedSequence& in, const Schema& schema,
                          const WorkerPool& pool) {
  PartitionedSequence rows = annotate(in, schema, pool);
  TupleFrame out;
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    out.columns.push_back(static_cast<VarId>(i));
    out.names.push_back(schema.fields[i].first);
    fields.push_back(schema.fields[i].first);
  }
  for (auto& p : rows.partitions) {
    out.partitions.push_back([p = std::move(p), fields](const TupleSink& sink) {
      p([&](const Item& row) {
        Tuple t;
        for (const auto& f : fields) {
          const Item* v = row.member(f);
          t.push_back(v ? Sequence(*v) : Sequence());
        }
        sink(std::move(t));
      });
    });
  }
  return out;
}

}  // namespace jsoniq
