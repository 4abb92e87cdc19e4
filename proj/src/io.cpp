#include "labornet/io.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

#include "labornet/error.hpp"

namespace labornet {

namespace {

std::size_t intern(std::unordered_map<std::string, std::size_t>& index,
                   std::vector<std::string>& labels, const std::string& label) {
  const auto [it, inserted] = index.emplace(label, labels.size());
  if (inserted) labels.push_back(label);
  return it->second;
}

void require_label(const std::string& label, const std::string& where) {
  if (label.empty()) throw Error(ErrorKind::Parse, where + ": empty occupation label");
}

}  // namespace

TransitionCounts read_transitions(const CsvTable& table) {
  const std::size_t cs = table.column("source");
  const std::size_t ct = table.column("target");
  const std::size_t cc = table.column("count");
  std::unordered_map<std::string, std::size_t> index;
  TransitionCounts out;
  struct Entry { std::size_t i, j; std::int64_t c; };
  std::vector<Entry> entries;
  for (const auto& row : table.rows) {
    const std::string where = table.where(row);
    require_label(row.fields[cs], where);
    require_label(row.fields[ct], where);
    const std::size_t i = intern(index, out.labels, row.fields[cs]);
    const std::size_t j = intern(index, out.labels, row.fields[ct]);
    const std::int64_t c = parse_int(row.fields[cc], where);
    if (c < 0) throw Error(ErrorKind::Parse, where + ": negative transition count");
    entries.push_back({i, j, c});
  }
  const std::size_t n = out.labels.size();
  out.counts = DenseMatrix<std::int64_t>(n, n, 0);
  for (const auto& e : entries) out.counts(e.i, e.j) += e.c;
  return out;
}

void write_network(std::ostream& out, const Network& network, const Metadata& meta) {
  meta.write(out);
  out << "# self_loop=" << format_double(network.self_loop()) << '\n';
  out << "source,target,weight\n";
  const auto& labels = network.labels();
  for (std::size_t i = 0; i < network.size(); ++i) {
    for (std::size_t j = 0; j < network.size(); ++j) {
      const double w = network(i, j);
      if (w == 0.0 && i != j) continue;
      out << csv_field(labels[i]) << ',' << csv_field(labels[j]) << ',' << format_double(w)
          << '\n';
    }
  }
}

Network read_network(const CsvTable& table) {
  const auto r = table.meta("self_loop");
  if (!r) throw Error(ErrorKind::Parse, table.source + ": missing '# self_loop=' header");
  const double selfLoop = parse_double(*r, table.source);
  const std::size_t cs = table.column("source");
  const std::size_t ct = table.column("target");
  const std::size_t cw = table.column("weight");
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> labels;
  for (const auto& row : table.rows) {
    require_label(row.fields[cs], table.where(row));
    intern(index, labels, row.fields[cs]);
  }
  const std::size_t n = labels.size();
  DenseMatrix<double> a(n, n, 0.0);
  for (const auto& row : table.rows) {
    const std::string where = table.where(row);
    const auto jt = index.find(row.fields[ct]);
    if (jt == index.end()) {
      throw Error(ErrorKind::Parse, where + ": target '" + row.fields[ct] +
                                        "' never appears as a source");
    }
    a(index.at(row.fields[cs]), jt->second) = parse_double(row.fields[cw], where);
  }
  return Network(std::move(labels), std::move(a), selfLoop);
}

std::vector<RawScore> read_scores(const CsvTable& table) {
  const std::size_t cs = table.column("source_label");
  const std::size_t cv = table.column("score");
  const auto cw = table.find_column("weight");
  std::vector<RawScore> out;
  for (const auto& row : table.rows) {
    const std::string where = table.where(row);
    require_label(row.fields[cs], where);
    RawScore s;
    s.source = row.fields[cs];
    s.score = parse_double(row.fields[cv], where);
    if (cw) s.weight = parse_double(row.fields[*cw], where);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CrosswalkRow> read_crosswalk(const CsvTable& table) {
  const std::size_t cs = table.column("source_label");
  const std::size_t ct = table.column("target_label");
  std::vector<CrosswalkRow> out;
  for (const auto& row : table.rows) {
    require_label(row.fields[cs], table.where(row));
    require_label(row.fields[ct], table.where(row));
    out.push_back({row.fields[cs], row.fields[ct]});
  }
  return out;
}

std::vector<double> read_demand(const CsvTable& table, const std::vector<std::string>& labels) {
  const std::size_t co = table.column("occupation");
  const std::size_t cd = table.column("demand");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  std::vector<double> d(labels.size(), 0.0);
  std::vector<bool> seen(labels.size(), false);
  for (const auto& row : table.rows) {
    const std::string where = table.where(row);
    const auto it = index.find(row.fields[co]);
    if (it == index.end()) {
      throw Error(ErrorKind::InvalidArgument,
                  where + ": occupation '" + row.fields[co] + "' is not in the network");
    }
    if (seen[it->second]) {
      throw Error(ErrorKind::InvalidArgument,
                  where + ": occupation '" + row.fields[co] + "' listed twice");
    }
    seen[it->second] = true;
    d[it->second] = parse_double(row.fields[cd], where);
    if (!(d[it->second] >= 0.0)) throw Error(ErrorKind::Parse, where + ": negative demand");
  }
  std::string missing;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!seen[i]) missing += (missing.empty() ? "" : ", ") + labels[i];
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::UnmappedOccupation, table.source + ": no demand for " + missing);
  }
  return d;
}

void write_series(std::ostream& out, const Trajectory& series,
                  const std::vector<std::string>& labels, const Metadata& meta) {
  meta.write(out);
  const bool occ = series.has_occupations();
  if (occ && labels.size() != series.occupation_count()) {
    throw Error(ErrorKind::DimensionMismatch, "one label per occupation is required");
  }
  out << "t,U,V,E,U_lt";
  if (occ) {
    for (const char* prefix : {"e_", "u_", "v_", "ult_"}) {
      for (const auto& l : labels) out << ',' << csv_field(prefix + l);
    }
  }
  out << '\n';
  for (std::size_t t = 0; t < series.aggregate.size(); ++t) {
    const auto& p = series.aggregate[t];
    out << p.t << ',' << format_double(p.unemployed) << ',' << format_double(p.vacancies) << ','
        << format_double(p.employed) << ',' << format_double(p.longTermUnemployed);
    if (occ) {
      const auto& o = series.occupations[t];
      for (const auto* col : {&o.employed, &o.unemployed, &o.vacancies, &o.longTermUnemployed}) {
        for (const double x : *col) out << ',' << format_double(x);
      }
    }
    out << '\n';
  }
}

void write_curve(std::ostream& out, const RateSeries& rates, const Metadata& meta) {
  meta.write(out);
  out << "t,u_rate,v_rate\n";
  for (std::size_t k = 0; k < rates.aggregate.size(); ++k) {
    out << rates.t[k] << ',' << format_double(rates.aggregate[k].unemployment) << ','
        << format_double(rates.aggregate[k].vacancy) << '\n';
  }
}

BeveridgeCurve read_curve(const CsvTable& table) {
  BeveridgeCurve c;
  const auto cu = table.find_column("u_rate");
  const auto cv = table.find_column("v_rate");
  if (cu && cv) {
    for (const auto& row : table.rows) {
      const std::string where = table.where(row);
      c.points.push_back({parse_double(row.fields[*cu], where),
                          parse_double(row.fields[*cv], where)});
    }
    return c;
  }
  const auto cU = table.find_column("U");
  const auto cV = table.find_column("V");
  const auto cE = table.find_column("E");
  if (!cU || !cV || !cE) {
    throw Error(ErrorKind::Parse,
                table.source + ": need u_rate,v_rate columns or U,V,E columns");
  }
  for (const auto& row : table.rows) {
    const std::string where = table.where(row);
    const double u = parse_double(row.fields[*cU], where);
    const double v = parse_double(row.fields[*cV], where);
    const double e = parse_double(row.fields[*cE], where);
    if (!(u + e > 0.0)) throw Error(ErrorKind::ZeroDenominator, where + ": U + E is zero");
    c.points.push_back({u / (u + e), v + e > 0.0 ? v / (v + e) : 0.0});
  }
  return c;
}

void write_steady(std::ostream& out, const SteadyState& steady,
                  const std::vector<std::string>& labels, const Metadata& meta) {
  meta.write(out);
  out << "occupation,e,u,v,d_star\n";
  const auto& s = steady.state;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << csv_field(labels.at(i)) << ',' << format_double(s.employed[i]) << ','
        << format_double(s.unemployed[i]) << ',' << format_double(s.vacancies[i]) << ','
        << format_double(steady.dStar[i]) << '\n';
  }
}

void write_demand(std::ostream& out, const DemandPath& path,
                  const std::vector<std::string>& labels, const Metadata& meta) {
  if (labels.size() != path.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one label per occupation is required");
  }
  meta.write(out);
  out << "t,occupation,target_demand\n";
  std::vector<double> d(path.size());
  for (std::int64_t t = 0; t < path.horizon(); ++t) {
    path.evaluate(t, d);
    for (std::size_t i = 0; i < d.size(); ++i) {
      out << t << ',' << csv_field(labels[i]) << ',' << format_double(d[i]) << '\n';
    }
  }
}

void write_score_table(std::ostream& out, const CalibrationResult& result, const Metadata& meta) {
  meta.write(out);
  out << "a,delta_u,delta_v,dt_weeks,iou\n";
  for (const auto& row : result.table) {
    out << format_double(row.amplitude) << ',' << format_double(row.deltaU) << ','
        << format_double(row.deltaV) << ',' << format_double(row.dtWeeks) << ','
        << (row.degenerate ? std::string("nan") : format_double(row.iou)) << '\n';
  }
}

}  // namespace labornet
