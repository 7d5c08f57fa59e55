#include "vhm/io.h"

#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace vhm {

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<std::string> readLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

Error parseError(const std::string& path, int line, const std::string& what) {
  return Error(path + ":" + std::to_string(line) + ": " + what);
}

long parseInt(const std::string& path, const Token& tok) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.text.size())
    throw parseError(path, tok.line, "expected an integer, got '" + tok.text + "'");
  return v;
}

double parseDouble(const std::string& path, const Token& tok) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.text.size())
    throw parseError(path, tok.line, "expected a number, got '" + tok.text + "'");
  return v;
}

LoadedMesh loadObj(const std::string& path, const std::vector<std::string>& lines) {
  LoadedMesh out;
  std::vector<std::array<long, 3>> rawFaces;
  std::vector<int> faceLines;
  for (size_t k = 0; k < lines.size(); k++) {
    int lineNo = static_cast<int>(k) + 1;
    std::istringstream ss(lines[k]);
    std::string head;
    if (!(ss >> head) || head[0] == '#') continue;
    if (head == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z))
        throw parseError(path, lineNo, "vertex record needs three coordinates");
      out.positions.emplace_back(x, y, z);
    } else if (head == "f") {
      std::vector<long> refs;
      std::string item;
      while (ss >> item) {
        // keep only the vertex index of "v", "v/t" or "v//n" references
        size_t slash = item.find('/');
        refs.push_back(parseInt(path, Token{item.substr(0, slash), lineNo}));
      }
      if (refs.size() != 3)
        throw parseError(path, lineNo,
                         "face has " + std::to_string(refs.size()) +
                             " vertices; only triangles are supported");
      rawFaces.push_back({refs[0], refs[1], refs[2]});
      faceLines.push_back(lineNo);
    }
    // other records (vn, vt, o, s, ...) are ignored
  }
  long nV = static_cast<long>(out.positions.size());
  for (size_t f = 0; f < rawFaces.size(); f++) {
    std::array<int, 3> face{};
    for (int c = 0; c < 3; c++) {
      long r = rawFaces[f][c];
      long idx = r < 0 ? nV + r : r - 1; // OBJ indices are 1-based; negative counts back
      if (idx < 0 || idx >= nV)
        throw parseError(path, faceLines[f],
                         "vertex reference " + std::to_string(r) + " is out of range");
      face[c] = static_cast<int>(idx);
    }
    out.faces.push_back(face);
  }
  return out;
}

LoadedMesh loadIntrinsic(const std::string& path, const std::vector<std::string>& lines) {
  std::vector<Token> tokens;
  for (size_t k = 0; k < lines.size(); k++) {
    std::istringstream ss(lines[k]);
    std::string item;
    while (ss >> item) {
      if (item[0] == '#') break;
      tokens.push_back({item, static_cast<int>(k) + 1});
    }
  }
  size_t cursor = 0;
  auto next = [&](const char* what) -> const Token& {
    if (cursor >= tokens.size())
      throw parseError(path, lines.empty() ? 1 : static_cast<int>(lines.size()),
                       std::string("unexpected end of file; expected ") + what);
    return tokens[cursor++];
  };

  long nV = parseInt(path, next("vertex count"));
  long nF = parseInt(path, next("face count"));
  long nE = parseInt(path, next("edge count"));
  if (nV <= 0 || nF <= 0 || nE <= 0)
    throw parseError(path, tokens[0].line, "counts must be positive");

  LoadedMesh out;
  for (long f = 0; f < nF; f++) {
    std::array<int, 3> face{};
    for (int c = 0; c < 3; c++) {
      const Token& tok = next("face vertex index");
      long idx = parseInt(path, tok);
      if (idx < 0 || idx >= nV)
        throw parseError(path, tok.line,
                         "vertex index " + std::to_string(idx) + " is out of range");
      face[c] = static_cast<int>(idx);
    }
    out.faces.push_back(face);
  }
  for (long e = 0; e < nE; e++) {
    const Token& tok = next("edge length");
    double len = parseDouble(path, tok);
    if (!(len > 0.0))
      throw parseError(path, tok.line, "edge lengths must be positive");
    out.edgeLengths.push_back(len);
  }
  if (cursor != tokens.size())
    throw parseError(path, tokens[cursor].line, "trailing data after the edge lengths");
  return out;
}

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void hashBytes(uint64_t& h, const void* data, size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t k = 0; k < n; k++) {
    h ^= p[k];
    h *= 0x100000001b3ULL;
  }
}

} // namespace

LoadedMesh loadMeshFile(const std::string& path) {
  std::vector<std::string> lines = readLines(path);
  for (const std::string& line : lines) {
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      if (c == '#') break;
      // the intrinsic format opens with its counts line; OBJ with a keyword
      if (std::isdigit(static_cast<unsigned char>(c)))
        return loadIntrinsic(path, lines);
      return loadObj(path, lines);
    }
  }
  throw Error(path + ": file contains no mesh data");
}

IntrinsicMesh loadMesh(const std::string& path) {
  LoadedMesh data = loadMeshFile(path);
  try {
    if (data.hasPositions()) return buildIntrinsicMesh(data.faces, data.positions);
    return buildIntrinsicMesh(data.faces, data.edgeLengths);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string meshChecksum(const IntrinsicMesh& mesh) {
  uint64_t h = 0xcbf29ce484222325ULL;
  int nV = mesh.nVertices(), nF = mesh.nFaces();
  hashBytes(h, &nV, sizeof(nV));
  hashBytes(h, &nF, sizeof(nF));
  for (int f = 0; f < nF; f++) {
    auto vs = mesh.faceVertices(f);
    hashBytes(h, vs.data(), sizeof(vs));
  }
  hashBytes(h, mesh.edgeLength.data(), mesh.edgeLength.size() * sizeof(double));
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void checkUniform(const FieldExport& field, bool& hasExt, bool& hasUv) {
  hasExt = !field.records.empty() && field.records.front().extrinsic.has_value();
  hasUv = !field.records.empty() && field.records.front().uv.has_value();
  for (const FieldRecord& r : field.records)
    if (r.extrinsic.has_value() != hasExt || r.uv.has_value() != hasUv)
      throw Error("export records must carry the same optional columns");
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

} // namespace

void writeFieldCsv(const FieldExport& field, const std::string& path) {
  bool hasExt = false, hasUv = false;
  checkUniform(field, hasExt, hasUv);
  std::ofstream out = openOut(path);
  out << "# " << field.toolVersion << " " << kFieldSchema << "\n";
  out << "# mesh=" << field.meshChecksum << " t=" << formatDouble(field.t)
      << " t_mult=" << formatDouble(field.tMultiplier) << " degree=" << field.degree
      << " idt=" << (field.usedIdt ? 1 : 0) << "\n";
  out << "vertex,angle,magnitude";
  if (hasExt) out << ",ex,ey,ez";
  if (hasUv) out << ",u,v";
  out << "\n";
  for (const FieldRecord& r : field.records) {
    out << r.vertex << "," << formatDouble(r.angle) << "," << formatDouble(r.magnitude);
    if (hasExt)
      for (int c = 0; c < 3; c++) out << "," << formatDouble((*r.extrinsic)[c]);
    if (hasUv)
      for (int c = 0; c < 2; c++) out << "," << formatDouble((*r.uv)[c]);
    out << "\n";
  }
  if (!out) throw Error("write failed for " + path);
}

void writeFieldJson(const FieldExport& field, const std::string& path) {
  bool hasExt = false, hasUv = false;
  checkUniform(field, hasExt, hasUv);
  nlohmann::json j;
  j["schema"] = kFieldSchema;
  j["tool_version"] = field.toolVersion;
  j["mesh_checksum"] = field.meshChecksum;
  j["t"] = field.t;
  j["t_mult"] = field.tMultiplier;
  j["degree"] = field.degree;
  j["idt"] = field.usedIdt;
  nlohmann::json records = nlohmann::json::array();
  for (const FieldRecord& r : field.records) {
    nlohmann::json rec;
    rec["vertex"] = r.vertex;
    rec["angle"] = r.angle;
    rec["magnitude"] = r.magnitude;
    if (hasExt) rec["extrinsic"] = {(*r.extrinsic)[0], (*r.extrinsic)[1], (*r.extrinsic)[2]};
    if (hasUv) rec["uv"] = {(*r.uv)[0], (*r.uv)[1]};
    records.push_back(rec);
  }
  j["records"] = records;
  std::ofstream out = openOut(path);
  out << j.dump(2) << "\n";
  if (!out) throw Error("write failed for " + path);
}

void writeField(const FieldExport& field, const std::string& format, const std::string& path) {
  if (format == "csv")
    writeFieldCsv(field, path);
  else if (format == "json")
    writeFieldJson(field, path);
  else
    throw Error("unknown export format '" + format + "' (expected csv or json)");
}

namespace {

FieldExport readFieldCsv(const std::string& path, const std::vector<std::string>& lines) {
  if (lines.size() < 3) throw Error(path + ": truncated export");
  FieldExport field;
  {
    const std::string& l = lines[0];
    size_t schema = l.rfind(' ');
    if (l.rfind("# ", 0) != 0 || schema == std::string::npos ||
        l.substr(schema + 1) != kFieldSchema)
      throw Error(path + ":1: not a field export");
    field.toolVersion = l.substr(2, schema - 2);
  }
  {
    std::istringstream ss(lines[1]);
    std::string hash, item;
    ss >> hash;
    while (ss >> item) {
      size_t eq = item.find('=');
      if (eq == std::string::npos) throw Error(path + ":2: malformed metadata");
      std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      if (key == "mesh") field.meshChecksum = value;
      else if (key == "t") field.t = std::stod(value);
      else if (key == "t_mult") field.tMultiplier = std::stod(value);
      else if (key == "degree") field.degree = std::stoi(value);
      else if (key == "idt") field.usedIdt = value == "1";
      else throw Error(path + ":2: unknown metadata key '" + key + "'");
    }
  }
  bool hasExt = lines[2].find(",ex,") != std::string::npos;
  bool hasUv = lines[2].find(",u,v") != std::string::npos;
  for (size_t k = 3; k < lines.size(); k++) {
    if (lines[k].empty()) continue;
    std::istringstream ss(lines[k]);
    std::vector<double> cells;
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(parseDouble(path, Token{cell, static_cast<int>(k) + 1}));
    size_t expect = 3 + (hasExt ? 3 : 0) + (hasUv ? 2 : 0);
    if (cells.size() != expect)
      throw Error(path + ":" + std::to_string(k + 1) + ": wrong column count");
    FieldRecord r;
    r.vertex = static_cast<int>(cells[0]);
    r.angle = cells[1];
    r.magnitude = cells[2];
    size_t at = 3;
    if (hasExt) {
      r.extrinsic = Vec3{cells[at], cells[at + 1], cells[at + 2]};
      at += 3;
    }
    if (hasUv) r.uv = Vec2{cells[at], cells[at + 1]};
    field.records.push_back(r);
  }
  return field;
}

FieldExport readFieldJson(const std::string& path) {
  std::ifstream in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(path + ": " + e.what());
  }
  if (j.value("schema", "") != kFieldSchema)
    throw Error(path + ": not a field export");
  FieldExport field;
  field.toolVersion = j.value("tool_version", "");
  field.meshChecksum = j.value("mesh_checksum", "");
  field.t = j.value("t", 0.0);
  field.tMultiplier = j.value("t_mult", 0.0);
  field.degree = j.value("degree", 1);
  field.usedIdt = j.value("idt", true);
  for (const auto& rec : j["records"]) {
    FieldRecord r;
    r.vertex = rec["vertex"];
    r.angle = rec["angle"];
    r.magnitude = rec["magnitude"];
    if (rec.contains("extrinsic"))
      r.extrinsic = Vec3{rec["extrinsic"][0].get<double>(), rec["extrinsic"][1].get<double>(),
                         rec["extrinsic"][2].get<double>()};
    if (rec.contains("uv"))
      r.uv = Vec2{rec["uv"][0].get<double>(), rec["uv"][1].get<double>()};
    field.records.push_back(r);
  }
  return field;
}

} // namespace

FieldExport readField(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw Error("cannot open " + path);
  char first = 0;
  probe >> first;
  if (first == '{') return readFieldJson(path);
  return readFieldCsv(path, readLines(path));
}

} // namespace vhm
