#include "netsample/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"

namespace netsample {

std::string_view to_string(VariableKind kind) noexcept {
  return kind == VariableKind::Binary ? "binary" : "real";
}

void AttributeTable::add_variable(std::string name, VariableKind kind, std::vector<double> values,
                                  std::vector<std::uint8_t> missing) {
  if (name.empty()) throw ValidationError("variable name must not be empty");
  if (index_of(name)) throw ValidationError("duplicate variable `" + name + "`");
  if (values.size() != node_count_) {
    throw ValidationError("variable `" + name + "` has " + std::to_string(values.size()) +
                          " values for " + std::to_string(node_count_) + " nodes");
  }
  if (missing.empty()) missing.assign(node_count_, 0);
  if (missing.size() != node_count_) throw ValidationError("missing mask length mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("variable `" + name + "` has invalid value " +
                            csv::format_double(v) + " at row " + std::to_string(i));
    }
    if (kind == VariableKind::Binary && v != 0.0 && v != 1.0) {
      throw ValidationError("binary variable `" + name + "` has value " + csv::format_double(v) +
                            " at row " + std::to_string(i));
    }
  }
  names_.push_back(std::move(name));
  kinds_.push_back(kind);
  columns_.push_back(std::move(values));
  missing_.push_back(std::move(missing));
}

std::optional<std::size_t> AttributeTable::index_of(std::string_view name) const noexcept {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

double AttributeTable::mean(std::size_t var) const {
  const auto col = column(var);
  if (col.empty()) return 0.0;
  return std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
}

AttributeTable parse_attributes(std::istream& in, std::string_view source,
                                const PopulationGraph& graph, Diagnostics* diagnostics) {
  const std::string src(source);
  const std::size_t n = graph.node_count();

  struct Column {
    std::string name;
    std::optional<VariableKind> declared;
    std::vector<double> values;
    std::vector<std::uint8_t> missing;
  };
  std::vector<Column> cols;
  std::vector<std::uint8_t> seen(n, 0);
  bool have_header = false;

  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    const auto fields = csv::split(text, ',');
    if (!have_header) {
      if (fields.empty() || fields[0] != "id") {
        throw ParseError(src, line, "header must start with `id`");
      }
      for (std::size_t c = 1; c < fields.size(); ++c) {
        Column col;
        std::string_view head = fields[c];
        if (const auto colon = head.find(':'); colon != std::string_view::npos) {
          const auto kind = csv::trim(head.substr(colon + 1));
          head = csv::trim(head.substr(0, colon));
          if (kind == "binary") col.declared = VariableKind::Binary;
          else if (kind == "real") col.declared = VariableKind::Real;
          else throw ParseError(src, line, "unknown variable kind `" + std::string(kind) + "`");
        }
        if (head.empty()) throw ParseError(src, line, "empty variable name in column " +
                                                          std::to_string(c + 1));
        col.name = std::string(head);
        col.values.assign(n, 0.0);
        col.missing.assign(n, 1);
        cols.push_back(std::move(col));
      }
      have_header = true;
      return;
    }
    if (fields.size() != cols.size() + 1) {
      throw ParseError(src, line, "expected " + std::to_string(cols.size() + 1) +
                                      " fields, got " + std::to_string(fields.size()));
    }
    const auto id = csv::parse_int(fields[0]);
    if (!id) throw ParseError(src, line, "non-integer id `" + std::string(fields[0]) + "`");
    const auto node = graph.find(*id);
    if (!node) throw ParseError(src, line, "unknown node id " + std::to_string(*id));
    if (seen[*node]) throw ParseError(src, line, "duplicate row for node id " + std::to_string(*id));
    seen[*node] = 1;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string_view cell = fields[c + 1];
      if (cell.empty() || cell == "NA") continue;
      const auto v = csv::parse_double(cell);
      if (!v) {
        throw ParseError(src, line, "non-numeric value `" + std::string(cell) + "` in column `" +
                                        cols[c].name + "`");
      }
      cols[c].values[*node] = *v;
      cols[c].missing[*node] = 0;
    }
  });
  if (!have_header) throw ParseError(src, 1, "attribute file has no header");

  const auto absent = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 0));
  if (absent > 0 && diagnostics) {
    diagnostics->warn(src + ": " + std::to_string(absent) +
                      " node(s) have no attribute row; all their values imputed to 0");
  }

  AttributeTable table(n);
  for (Column& col : cols) {
    VariableKind kind = VariableKind::Binary;
    if (col.declared) {
      kind = *col.declared;
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!col.missing[i] && col.values[i] != 0.0 && col.values[i] != 1.0) {
          kind = VariableKind::Real;
          break;
        }
      }
    }
    const auto missing = static_cast<std::size_t>(std::count(col.missing.begin(), col.missing.end(), 1));
    if (missing > 0 && diagnostics) {
      diagnostics->warn(src + ": variable `" + col.name + "` has " + std::to_string(missing) +
                        " missing value(s) set to 0");
    }
    table.add_variable(std::move(col.name), kind, std::move(col.values), std::move(col.missing));
  }
  return table;
}

AttributeTable load_attributes(const std::filesystem::path& path, const PopulationGraph& graph,
                               Diagnostics* diagnostics) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open attribute file " + path.string());
  return parse_attributes(in, path.string(), graph, diagnostics);
}

std::vector<ExternalId> read_attribute_ids(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open attribute file " + path.string());
  std::vector<ExternalId> ids;
  bool header = true;
  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    if (header) {
      header = false;
      return;
    }
    const auto fields = csv::split(text, ',');
    const auto id = csv::parse_int(fields[0]);
    if (!id || *id < 0) {
      throw ParseError(path.string(), line, "invalid node id `" + std::string(fields[0]) + "`");
    }
    ids.push_back(*id);
  });
  return ids;
}

std::string format_attributes(const AttributeTable& table, const PopulationGraph& graph) {
  std::ostringstream out;
  out << "id";
  for (std::size_t v = 0; v < table.variable_count(); ++v) {
    out << ',' << table.name(v) << ':' << to_string(table.kind(v));
  }
  out << '\n';
  for (NodeId i = 0; i < table.node_count(); ++i) {
    out << graph.external_id(i);
    for (std::size_t v = 0; v < table.variable_count(); ++v) {
      out << ',';
      if (!table.missing(v)[i]) out << csv::format_double(table.value(v, i));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace netsample
