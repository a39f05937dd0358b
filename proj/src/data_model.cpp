#include "bipartite/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "bipartite/csv.hpp"
#include "bipartite/error.hpp"
#include "bipartite/exposure.hpp"

namespace bipartite {

namespace {

std::unordered_map<std::string, std::uint32_t> index_ids(
    const std::vector<std::string>& ids, const std::string& what) {
  std::unordered_map<std::string, std::uint32_t> map;
  map.reserve(ids.size());
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    if (!map.emplace(ids[i], i).second)
      raise(Errc::duplicate_id, what + ": duplicate id '" + ids[i] + "'");
  }
  return map;
}

void check_role(const std::vector<std::string>& role, const char* role_name,
                const std::vector<std::string>& names, const char* side) {
  for (const auto& name : role) {
    if (std::find(names.begin(), names.end(), name) == names.end())
      raise(Errc::unknown_id, std::string("schema role ") + role_name +
                                  " references unknown " + side +
                                  " covariate '" + name + "'");
  }
}

}  // namespace

const char* family_name(OutcomeFamily f) {
  return f == OutcomeFamily::poisson_offset ? "poisson_offset" : "normal";
}

OutcomeFamily family_from_name(const std::string& name) {
  if (name == "poisson_offset") return OutcomeFamily::poisson_offset;
  if (name == "normal") return OutcomeFamily::normal_linear;
  raise(Errc::config_error, "unknown outcome family '" + name +
                                "' (expected poisson_offset|normal)");
}

double InterferenceMap::row_total(std::size_t i) const {
  double total = 0.0;
  for (const auto& [j, w] : rows[i]) total += w;  // ascending-index order
  return total;
}

std::vector<double> InterferenceMap::dense() const {
  std::vector<double> out(n_outcome * n_interventional, 0.0);
  for (std::size_t i = 0; i < n_outcome; ++i)
    for (const auto& [j, w] : rows[i]) out[i * n_interventional + j] = w;
  return out;
}

std::size_t BipartiteDataset::interventional_covariate_index(
    const std::string& name) const {
  for (std::size_t i = 0; i < interventional_covariate_names.size(); ++i)
    if (interventional_covariate_names[i] == name) return i;
  raise(Errc::unknown_id, "unknown interventional covariate '" + name + "'");
}

std::size_t BipartiteDataset::outcome_covariate_index(
    const std::string& name) const {
  for (std::size_t i = 0; i < outcome_covariate_names.size(); ++i)
    if (outcome_covariate_names[i] == name) return i;
  raise(Errc::unknown_id, "unknown outcome covariate '" + name + "'");
}

void BipartiteDataset::validate() const {
  if (interference.n_outcome != outcome_units.size() ||
      interference.n_interventional != interventional_units.size())
    raise(Errc::dimension_mismatch,
          "interference map is " + std::to_string(interference.n_outcome) +
              "x" + std::to_string(interference.n_interventional) +
              " but dataset has " + std::to_string(outcome_units.size()) +
              " outcome / " + std::to_string(interventional_units.size()) +
              " interventional units");

  for (const auto& u : interventional_units) {
    if (u.treated != 0 && u.treated != 1)
      raise(Errc::non_binary_treatment,
            "interventional unit '" + u.id + "' has treated=" +
                std::to_string(u.treated) + " (must be 0 or 1)");
    if (u.covariates.size() != interventional_covariate_names.size())
      raise(Errc::dimension_mismatch,
            "interventional unit '" + u.id + "' has " +
                std::to_string(u.covariates.size()) + " covariates, schema has " +
                std::to_string(interventional_covariate_names.size()));
  }

  const bool poisson = schema.family == OutcomeFamily::poisson_offset;
  for (const auto& u : outcome_units) {
    if (!(u.offset_exposure > 0.0) || !std::isfinite(u.offset_exposure))
      raise(Errc::bad_format, "outcome unit '" + u.id +
                                  "' has non-positive offset " +
                                  std::to_string(u.offset_exposure));
    if (poisson && u.outcome < 0.0)
      raise(Errc::bad_format, "outcome unit '" + u.id +
                                  "' has negative outcome under the Poisson family");
    if (u.covariates.size() != outcome_covariate_names.size())
      raise(Errc::dimension_mismatch,
            "outcome unit '" + u.id + "' has " +
                std::to_string(u.covariates.size()) + " covariates, schema has " +
                std::to_string(outcome_covariate_names.size()));
  }

  for (std::size_t i = 0; i < interference.rows.size(); ++i) {
    const auto& row = interference.rows[i];
    if (row.empty())
      raise(Errc::orphan_outcome_unit,
            "outcome unit '" + outcome_units[i].id +
                "' has no interference entries (no key-associated unit exists)");
    std::uint32_t prev = 0;
    bool first = true;
    for (const auto& [j, w] : row) {
      if (j >= interference.n_interventional)
        raise(Errc::dimension_mismatch, "interference column out of range");
      if (!first && j <= prev)
        raise(Errc::duplicate_id,
              "duplicate interference entry for ('" + outcome_units[i].id +
                  "','" + interventional_units[j].id + "')");
      if (!(w > 0.0) || !std::isfinite(w))
        raise(Errc::negative_weight,
              "interference weight for ('" + outcome_units[i].id + "','" +
                  interventional_units[j].id + "') is " + format_double(w) +
                  " (must be finite and > 0)");
      prev = j;
      first = false;
    }
  }

  check_role(schema.x_int_z, "x_int_z", interventional_covariate_names, "interventional");
  check_role(schema.x_int_g, "x_int_g", interventional_covariate_names, "interventional");
  check_role(schema.x_out_z, "x_out_z", outcome_covariate_names, "outcome");
  check_role(schema.x_out_g, "x_out_g", outcome_covariate_names, "outcome");
  check_role(schema.x_out_outcome, "x_out_outcome", outcome_covariate_names, "outcome");
}

BipartiteDataset load_dataset(const std::string& interventional_path,
                              const std::string& outcome_path,
                              const std::string& interference_path,
                              const CovariateSchema& schema) {
  BipartiteDataset ds;
  ds.schema = schema;

  // interventional.csv: id,treated,<covariates...>
  {
    CsvTable t = read_csv(interventional_path);
    const std::size_t id_col = t.require_col("id");
    const std::size_t tr_col = t.require_col("treated");
    for (std::size_t c = 0; c < t.header.size(); ++c)
      if (c != id_col && c != tr_col)
        ds.interventional_covariate_names.push_back(t.header[c]);
    for (const auto& row : t.rows) {
      InterventionalUnit u;
      u.id = row[id_col];
      const std::string& tr = row[tr_col];
      if (tr == "0") u.treated = 0;
      else if (tr == "1") u.treated = 1;
      else
        raise(Errc::non_binary_treatment,
              interventional_path + ": unit '" + u.id + "' has treated='" +
                  tr + "' (must be 0 or 1)");
      for (std::size_t c = 0; c < t.header.size(); ++c)
        if (c != id_col && c != tr_col)
          u.covariates.push_back(parse_double_field(
              row[c], interventional_path + " unit '" + u.id + "' column '" +
                          t.header[c] + "'"));
      ds.interventional_units.push_back(std::move(u));
    }
  }

  // outcome.csv: id,outcome,offset,<covariates...>
  {
    CsvTable t = read_csv(outcome_path);
    const std::size_t id_col = t.require_col("id");
    const std::size_t y_col = t.require_col("outcome");
    const std::size_t off_col = t.require_col("offset");
    for (std::size_t c = 0; c < t.header.size(); ++c)
      if (c != id_col && c != y_col && c != off_col)
        ds.outcome_covariate_names.push_back(t.header[c]);
    for (const auto& row : t.rows) {
      OutcomeUnit u;
      u.id = row[id_col];
      u.outcome = parse_double_field(row[y_col], outcome_path + " unit '" + u.id + "' outcome");
      u.offset_exposure =
          parse_double_field(row[off_col], outcome_path + " unit '" + u.id + "' offset");
      for (std::size_t c = 0; c < t.header.size(); ++c)
        if (c != id_col && c != y_col && c != off_col)
          u.covariates.push_back(parse_double_field(
              row[c], outcome_path + " unit '" + u.id + "' column '" + t.header[c] + "'"));
      ds.outcome_units.push_back(std::move(u));
    }
  }

  std::vector<std::string> out_ids, int_ids;
  out_ids.reserve(ds.outcome_units.size());
  for (const auto& u : ds.outcome_units) out_ids.push_back(u.id);
  int_ids.reserve(ds.interventional_units.size());
  for (const auto& u : ds.interventional_units) int_ids.push_back(u.id);
  const auto out_index = index_ids(out_ids, outcome_path);
  const auto int_index = index_ids(int_ids, interventional_path);

  // interference.csv: outcome_id,interventional_id,weight (sparse triplets)
  {
    CsvTable t = read_csv(interference_path);
    const std::size_t oc = t.require_col("outcome_id");
    const std::size_t ic = t.require_col("interventional_id");
    const std::size_t wc = t.require_col("weight");
    ds.interference.n_outcome = ds.outcome_units.size();
    ds.interference.n_interventional = ds.interventional_units.size();
    ds.interference.rows.resize(ds.interference.n_outcome);
    std::size_t lineno = 1;
    for (const auto& row : t.rows) {
      ++lineno;
      const auto oit = out_index.find(row[oc]);
      if (oit == out_index.end())
        raise(Errc::unknown_id, interference_path + ":" + std::to_string(lineno) +
                                    ": unknown outcome id '" + row[oc] + "'");
      const auto iit = int_index.find(row[ic]);
      if (iit == int_index.end())
        raise(Errc::unknown_id, interference_path + ":" + std::to_string(lineno) +
                                    ": unknown interventional id '" + row[ic] + "'");
      const double w = parse_double_field(
          row[wc], interference_path + ":" + std::to_string(lineno));
      if (!(w > 0.0) || !std::isfinite(w))
        raise(Errc::negative_weight,
              interference_path + ":" + std::to_string(lineno) + ": weight " +
                  row[wc] + " for ('" + row[oc] + "','" + row[ic] +
                  "') must be finite and > 0");
      ds.interference.rows[oit->second].emplace_back(iit->second, w);
    }
    for (std::size_t i = 0; i < ds.interference.rows.size(); ++i) {
      auto& sparse_row = ds.interference.rows[i];
      std::sort(sparse_row.begin(), sparse_row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t k = 1; k < sparse_row.size(); ++k)
        if (sparse_row[k].first == sparse_row[k - 1].first)
          raise(Errc::duplicate_id,
                interference_path + ": duplicate entry for ('" +
                    ds.outcome_units[i].id + "','" +
                    ds.interventional_units[sparse_row[k].first].id + "')");
    }
  }

  ds.validate();
  return ds;
}

void write_dataset(const BipartiteDataset& ds,
                   const std::string& interventional_path,
                   const std::string& outcome_path,
                   const std::string& interference_path) {
  {
    std::vector<std::string> header = {"id", "treated"};
    header.insert(header.end(), ds.interventional_covariate_names.begin(),
                  ds.interventional_covariate_names.end());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(ds.interventional_units.size());
    for (const auto& u : ds.interventional_units) {
      std::vector<std::string> row = {u.id, std::to_string(u.treated)};
      for (double v : u.covariates) row.push_back(format_double(v));
      rows.push_back(std::move(row));
    }
    write_csv(interventional_path, header, rows);
  }
  {
    std::vector<std::string> header = {"id", "outcome", "offset"};
    header.insert(header.end(), ds.outcome_covariate_names.begin(),
                  ds.outcome_covariate_names.end());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(ds.outcome_units.size());
    for (const auto& u : ds.outcome_units) {
      std::vector<std::string> row = {u.id, format_double(u.outcome),
                                      format_double(u.offset_exposure)};
      for (double v : u.covariates) row.push_back(format_double(v));
      rows.push_back(std::move(row));
    }
    write_csv(outcome_path, header, rows);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < ds.interference.rows.size(); ++i)
      for (const auto& [j, w] : ds.interference.rows[i])
        rows.push_back({ds.outcome_units[i].id,
                        ds.interventional_units[j].id, format_double(w)});
    write_csv(interference_path, {"outcome_id", "interventional_id", "weight"},
              rows);
  }
}

std::vector<TreatmentSummaryRow> summarize_by_treatment(
    const BipartiteDataset& ds, const ExposureTable& exposures) {
  if (exposures.size() != ds.n_outcome())
    raise(Errc::length_mismatch,
          "exposure table does not match dataset outcome units");

  const auto group_means = [&](auto&& value_of) {
    double s0 = 0.0, s1 = 0.0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < exposures.size(); ++i) {
      const double v = value_of(i);
      if (exposures.z[i] == 1) {
        s1 += v;
        ++n1;
      } else {
        s0 += v;
        ++n0;
      }
    }
    const double nan = std::nan("");
    return std::tuple<double, double, std::size_t, std::size_t>(
        n0 ? s0 / static_cast<double>(n0) : nan,
        n1 ? s1 / static_cast<double>(n1) : nan, n0, n1);
  };

  std::vector<TreatmentSummaryRow> out;
  {
    TreatmentSummaryRow row;
    row.name = "G";
    std::tie(row.mean_z0, row.mean_z1, row.n_z0, row.n_z1) =
        group_means([&](std::size_t i) { return exposures.g[i]; });
    out.push_back(row);
  }
  for (std::size_t c = 0; c < ds.outcome_covariate_names.size(); ++c) {
    TreatmentSummaryRow row;
    row.name = ds.outcome_covariate_names[c];
    std::tie(row.mean_z0, row.mean_z1, row.n_z0, row.n_z1) = group_means(
        [&](std::size_t i) { return ds.outcome_units[i].covariates[c]; });
    out.push_back(row);
  }
  // Key-associated plant characteristics, joined through j*.
  for (std::size_t c = 0; c < ds.interventional_covariate_names.size(); ++c) {
    TreatmentSummaryRow row;
    row.name = ds.interventional_covariate_names[c];
    row.interventional_side = true;
    std::tie(row.mean_z0, row.mean_z1, row.n_z0, row.n_z1) =
        group_means([&](std::size_t i) {
          return ds.interventional_units[exposures.key_index[i]].covariates[c];
        });
    out.push_back(row);
  }
  return out;
}

void write_treatment_summary_csv(const std::string& path,
                                 const std::vector<TreatmentSummaryRow>& rows) {
  std::vector<std::vector<std::string>> body;
  body.reserve(rows.size());
  for (const auto& r : rows) {
    body.push_back({r.name, r.interventional_side ? "interventional" : "outcome",
                    r.n_z0 ? format_double(r.mean_z0) : "",
                    r.n_z1 ? format_double(r.mean_z1) : ""});
  }
  write_csv(path, {"covariate", "side", "mean_z0", "mean_z1"}, body);
}

}  // namespace bipartite
