#include "pathgain/recover.hpp"

#include <algorithm>

#include "pathgain/equations.hpp"
#include "pathgain/error.hpp"
#include "pathgain/io.hpp"

namespace pathgain {

namespace {

using Vec = std::vector<std::uint32_t>;

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

Vec scaled(const FieldSpec& field, std::uint32_t c, const Vec& v) {
  Vec out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = field.mul_raw(c, v[k]);
  return out;
}

void add_into(const FieldSpec& field, Vec& acc, const Vec& v) {
  for (std::size_t k = 0; k < v.size(); ++k) acc[k] = field.add_raw(acc[k], v[k]);
}

std::vector<FieldElem> to_elems(const FieldSpec& field, const Vec& v) {
  std::vector<FieldElem> out;
  for (auto x : v) out.push_back(field.element(x));
  return out;
}

std::string vec_text(const FieldSpec& field, const Vec& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += " ";
    out += field.format(field.element(v[k]));
  }
  return out + "]";
}

}  // namespace

std::optional<FieldElem> NetworkCode::coeff(const std::string& from, const std::string& to) const {
  for (const auto& c : coeffs) {
    if (c.from == from && c.to == to) return c.value;
  }
  return std::nullopt;
}

NetworkCode derive_code(const Problem& problem, const Forest& forest, const Solution& solution) {
  const FieldSpec& field = solution.field;
  const std::size_t num_sources = problem.num_sources();

  Vec leaf(forest.leaf_vars().size(), 0);
  for (std::size_t id = 0; id < leaf.size(); ++id) {
    const auto name = forest.var_name(static_cast<int>(id));
    const auto v = solution.value_of(name);
    if (!v) raise(ErrorKind::NotASolution, "no value for " + name);
    if (v->field_tag() != field.tag()) raise(ErrorKind::FieldMismatch, "value of " + name + " is from another field");
    leaf[id] = v->index();
  }
  {
    PolySystem check;
    for (const auto& lv : forest.leaf_vars()) check.add_variable(Variable::path_gain(lv.source, lv.tree, lv.k));
    for (const auto& tp : build_no_interference(forest, problem)) check.add_equation(tp.poly, tp.tag);
    for (const auto& tp : build_edge_compat(forest, problem)) check.add_equation(tp.poly, tp.tag);
    for (const auto& e : check.equations()) {
      if (e.poly.evaluate(field, leaf) != 0) {
        raise(ErrorKind::NotASolution, "violates " + e.poly.to_string(check.names()) + " [" + e.tag + "]");
      }
    }
  }

  NetworkCode code;
  code.field = field;
  std::vector<Vec> f(problem.edges().size(), Vec(num_sources, 0));
  std::vector<Vec> c(problem.edges().size());
  auto copy_pos = [&forest](int tree_edge) {
    return static_cast<std::size_t>(forest.edges()[static_cast<std::size_t>(tree_edge)].copy - 1);
  };
  auto record = [&](const std::string& from, const std::string& to, std::uint32_t value) {
    code.coeffs.push_back(NetworkCode::Coeff{from, to, field.element(value)});
  };

  const TopoOrder order = topo_sort(problem);
  for (auto it = order.order.rbegin(); it != order.order.rend(); ++it) {
    const NodeId v = *it;
    if (auto i = problem.source_index_of(v)) {
      for (std::size_t e : problem.out_edges(v)) {
        f[e][static_cast<std::size_t>(*i - 1)] = 1;
        for (int te : forest.edge_replicas(e)) {
          const auto& tail = forest.nodes()[static_cast<std::size_t>(forest.edges()[static_cast<std::size_t>(te)].tail)];
          c[e].push_back(leaf[static_cast<std::size_t>(tail.leaf_var)]);
        }
        record(problem.virtual_source_edge(*i).id, problem.edge(e).id, 1);
      }
      continue;
    }
    if (auto j = problem.sink_index_of(v)) {
      const int root = forest.root(*j);
      for (std::size_t e : problem.in_edges(v)) {
        const int te = forest.input_copy(root, e);
        const std::uint32_t value = te < 0 ? 0 : c[e][copy_pos(te)];
        record(problem.edge(e).id, problem.virtual_sink_edge(*j).id, value);
        code.decode.push_back(NetworkCode::Decode{v, problem.edge(e).id, field.element(value)});
      }
      continue;
    }
    for (std::size_t e : problem.out_edges(v)) {
      const auto tails = forest.node_replicas_on(e);
      std::vector<Vec> rows(tails.size(), Vec(num_sources, 0));
      for (std::size_t pos = 0; pos < tails.size(); ++pos) {
        for (std::size_t ep : problem.in_edges(v)) {
          const int te = forest.input_copy(tails[pos], ep);
          if (te >= 0) add_into(field, rows[pos], scaled(field, c[ep][copy_pos(te)], f[ep]));
        }
      }
      const auto first = std::find_if(rows.begin(), rows.end(), [](const Vec& r) { return !is_zero(r); });
      c[e].assign(tails.size(), 0);
      if (first == rows.end()) {
        for (std::size_t ep : problem.in_edges(v)) record(problem.edge(ep).id, problem.edge(e).id, 0);
        continue;
      }
      const std::size_t star = static_cast<std::size_t>(first - rows.begin());
      f[e] = rows[star];
      for (std::size_t ep : problem.in_edges(v)) {
        const int te = forest.input_copy(tails[star], ep);
        record(problem.edge(ep).id, problem.edge(e).id, te < 0 ? 0 : c[ep][copy_pos(te)]);
      }
      const std::size_t lead = static_cast<std::size_t>(
          std::find_if(f[e].begin(), f[e].end(), [](std::uint32_t x) { return x != 0; }) - f[e].begin());
      for (std::size_t pos = 0; pos < rows.size(); ++pos) {
        c[e][pos] = field.div(field.element(rows[pos][lead]), field.element(f[e][lead])).index();
        if (scaled(field, c[e][pos], f[e]) != rows[pos]) {
          raise(ErrorKind::RankViolation, "flow on edge '" + problem.edge(e).id + "': row " +
                                              vec_text(field, rows[pos]) + " is not a multiple of " +
                                              vec_text(field, f[e]));
        }
      }
    }
  }

  for (std::size_t e = 0; e < problem.edges().size(); ++e) {
    code.edge_functions[problem.edge(e).id] = to_elems(field, f[e]);
    code.scaling[problem.edge(e).id] = to_elems(field, c[e]);
  }
  return code;
}

VerifyReport verify_code(const Problem& problem, const NetworkCode& code) {
  const FieldSpec& field = code.field;
  const std::size_t num_sources = problem.num_sources();
  std::map<std::pair<std::string, std::string>, std::uint32_t> a;
  for (const auto& cf : code.coeffs) a[{cf.from, cf.to}] = cf.value.index();
  auto gain = [&a](const std::string& from, const std::string& to) -> std::uint32_t {
    auto it = a.find({from, to});
    return it == a.end() ? 0 : it->second;
  };

  VerifyReport report;
  std::vector<Vec> f(problem.edges().size(), Vec(num_sources, 0));
  const TopoOrder order = topo_sort(problem);
  for (auto it = order.order.rbegin(); it != order.order.rend(); ++it) {
    const NodeId v = *it;
    if (auto i = problem.source_index_of(v)) {
      for (std::size_t e : problem.out_edges(v)) {
        f[e][static_cast<std::size_t>(*i - 1)] = gain(problem.virtual_source_edge(*i).id, problem.edge(e).id);
      }
      continue;
    }
    for (std::size_t e : problem.out_edges(v)) {
      Vec acc(num_sources, 0);
      for (std::size_t ep : problem.in_edges(v)) {
        add_into(field, acc, scaled(field, gain(problem.edge(ep).id, problem.edge(e).id), f[ep]));
      }
      f[e] = std::move(acc);
    }
  }
  for (std::size_t j = 0; j < problem.num_sinks(); ++j) {
    const auto& sink = problem.sinks()[j];
    const std::string out_id = problem.virtual_sink_edge(static_cast<int>(j + 1)).id;
    Vec received(num_sources, 0);
    for (std::size_t e : problem.in_edges(sink.node)) {
      add_into(field, received, scaled(field, gain(problem.edge(e).id, out_id), f[e]));
    }
    Vec expected(num_sources, 0);
    expected[static_cast<std::size_t>(sink.demand - 1)] = 1;
    SinkReport sr{sink.node, sink.demand, received == expected, to_elems(field, received)};
    report.pass = report.pass && sr.pass;
    report.sinks.push_back(std::move(sr));
  }
  return report;
}

nlohmann::ordered_json code_to_json(const NetworkCode& code) {
  const FieldSpec& field = code.field;
  nlohmann::ordered_json doc;
  doc["field"] = field.name();
  auto coeffs = nlohmann::ordered_json::array();
  for (const auto& c : code.coeffs) {
    nlohmann::ordered_json jc;
    jc["from"] = c.from;
    jc["to"] = c.to;
    jc["value"] = field.format(c.value);
    coeffs.push_back(std::move(jc));
  }
  doc["coeffs"] = std::move(coeffs);
  auto decode = nlohmann::ordered_json::array();
  for (const auto& d : code.decode) {
    nlohmann::ordered_json jd;
    jd["sink"] = d.sink;
    jd["edge"] = d.edge;
    jd["value"] = field.format(d.value);
    decode.push_back(std::move(jd));
  }
  doc["decode"] = std::move(decode);
  auto vectors = [&field](const std::map<std::string, std::vector<FieldElem>>& m) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [id, vec] : m) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& x : vec) arr.push_back(field.format(x));
      out[id] = std::move(arr);
    }
    return out;
  };
  doc["edge_functions"] = vectors(code.edge_functions);
  doc["scaling"] = vectors(code.scaling);
  return doc;
}

NetworkCode code_from_json(const nlohmann::ordered_json& doc) {
  try {
    NetworkCode code;
    code.field = FieldSpec::parse(doc.at("field").get<std::string>());
    const FieldSpec& field = code.field;
    for (const auto& jc : doc.at("coeffs")) {
      code.coeffs.push_back(NetworkCode::Coeff{jc.at("from").get<std::string>(), jc.at("to").get<std::string>(),
                                               field.parse_element(jc.at("value").get<std::string>())});
    }
    for (const auto& jd : doc.at("decode")) {
      code.decode.push_back(NetworkCode::Decode{jd.at("sink").get<NodeId>(), jd.at("edge").get<std::string>(),
                                                field.parse_element(jd.at("value").get<std::string>())});
    }
    auto vectors = [&field](const nlohmann::ordered_json& j, std::map<std::string, std::vector<FieldElem>>& m) {
      for (const auto& [id, arr] : j.items()) {
        auto& vec = m[id];
        for (const auto& x : arr) vec.push_back(field.parse_element(x.get<std::string>()));
      }
    };
    if (doc.contains("edge_functions")) vectors(doc.at("edge_functions"), code.edge_functions);
    if (doc.contains("scaling")) vectors(doc.at("scaling"), code.scaling);
    return code;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, std::string("network code: ") + e.what());
  }
}

NetworkCode code_load(const std::filesystem::path& path) { return code_from_json(read_ordered_json(path)); }

void code_save(const NetworkCode& code, const std::filesystem::path& path) {
  write_json_atomic(path, code_to_json(code));
}

nlohmann::ordered_json verify_report_to_json(const VerifyReport& report, const FieldSpec& field) {
  nlohmann::ordered_json doc;
  doc["pass"] = report.pass;
  auto sinks = nlohmann::ordered_json::array();
  for (const auto& s : report.sinks) {
    nlohmann::ordered_json js;
    js["sink"] = s.sink;
    js["demand"] = s.demand;
    js["pass"] = s.pass;
    auto rec = nlohmann::ordered_json::array();
    for (const auto& x : s.received) rec.push_back(field.format(x));
    js["received"] = std::move(rec);
    sinks.push_back(std::move(js));
  }
  doc["sinks"] = std::move(sinks);
  return doc;
}

}  // namespace pathgain
