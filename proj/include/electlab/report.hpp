#pragma once

// Report serialization. JSON mirrors the report structs; CSV is one row per
// system with a fixed column order:
//   study,system,trial_type,hits,misses,ties,hf_trials,baseline_pct_wins
// Output is byte-deterministic for a given report (no timestamps, fixed
// formatting), which is what makes seed-for-seed reproduction checkable.

#include <cstdio>
#include <string>

#include "json.hpp"

#include "electlab/studies.hpp"

namespace electlab {

namespace report_detail {

inline std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline std::string sci5(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4e", x);
  return buf;
}

inline nlohmann::ordered_json config_json(
    const std::vector<std::pair<std::string, std::string>>& config) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

inline nlohmann::ordered_json audit_json(const AuditRecord& a) {
  nlohmann::ordered_json j;
  j["trial"] = a.trial;
  j["true_winner"] = a.true_winner;
  nlohmann::ordered_json outcomes = nlohmann::ordered_json::object();
  for (const auto& [system, outcome] : a.outcomes) outcomes[system] = outcome;
  j["outcomes"] = outcomes;
  j["profile"] = a.profile_text;
  return j;
}

}  // namespace report_detail

inline nlohmann::ordered_json to_json(const StudyReport& r) {
  nlohmann::ordered_json j;
  j["study"] = r.study;
  j["trial_type"] = r.trial_type;
  j["config"] = report_detail::config_json(r.config);
  j["generated_trials"] = r.generated_trials;
  j["qualifying_trials"] = r.qualifying_trials;
  j["systems"] = nlohmann::ordered_json::array();
  for (const auto& t : r.totals) {
    nlohmann::ordered_json s;
    s["system"] = t.system;
    s["hits"] = t.hits;
    s["misses"] = t.misses;
    s["ties"] = t.ties;
    j["systems"].push_back(s);
  }
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : r.pairs) {
    nlohmann::ordered_json q;
    q["baseline"] = p.baseline;
    q["other"] = p.other;
    q["cells"] = {{p.cells[0][0], p.cells[0][1], p.cells[0][2]},
                  {p.cells[1][0], p.cells[1][1], p.cells[1][2]},
                  {p.cells[2][0], p.cells[2][1], p.cells[2][2]}};
    q["hf_trials"] = p.hf_trials();
    q["baseline_pct_wins"] = report_detail::fixed2(p.baseline_pct_wins());
    j["pairs"].push_back(q);
  }
  if (!r.audits.empty()) {
    j["audits"] = nlohmann::ordered_json::array();
    for (const auto& a : r.audits) j["audits"].push_back(report_detail::audit_json(a));
  }
  j["notices"] = r.notices;
  return j;
}

inline std::string to_csv(const StudyReport& r) {
  std::string out = "study,system,trial_type,hits,misses,ties,hf_trials,baseline_pct_wins\n";
  for (size_t i = 0; i < r.totals.size(); ++i) {
    const auto& t = r.totals[i];
    out += r.study + ',' + t.system + ',' + r.trial_type + ',' +
           std::to_string(t.hits) + ',' + std::to_string(t.misses) + ',' +
           std::to_string(t.ties) + ',';
    if (i == 0) {
      out += ",\n";
      continue;
    }
    const auto& p = r.pairs[i - 1];
    out += std::to_string(p.hf_trials()) + ',' +
           report_detail::fixed2(p.baseline_pct_wins()) + '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const TieRateReport& r) {
  nlohmann::ordered_json j;
  j["study"] = "tie-rate";
  j["method"] = r.method;
  j["config"] = report_detail::config_json(r.config);
  j["generated_trials"] = r.generated_trials;
  j["paradox_trials"] = r.paradox_trials;
  j["tied_trials"] = r.tied_trials;
  j["tie_rate"] = report_detail::sci5(r.tie_rate());
  return j;
}

inline std::string to_csv(const TieRateReport& r) {
  return "study,method,paradox_trials,tied_trials,tie_rate\n"
         "tie-rate," + r.method + ',' + std::to_string(r.paradox_trials) + ',' +
         std::to_string(r.tied_trials) + ',' + report_detail::sci5(r.tie_rate()) + '\n';
}

inline nlohmann::ordered_json to_json(const AgreementReport& r) {
  nlohmann::ordered_json j;
  j["study"] = "agreement";
  j["methods"] = r.methods;
  j["config"] = report_detail::config_json(r.config);
  j["generated_trials"] = r.generated_trials;
  j["qualifying_trials"] = r.qualifying_trials;
  j["agree"] = r.agree;
  if (!r.disagreements.empty()) {
    j["disagreements"] = nlohmann::ordered_json::array();
    for (const auto& a : r.disagreements)
      j["disagreements"].push_back(report_detail::audit_json(a));
  }
  return j;
}

inline std::string to_csv(const AgreementReport& r) {
  std::string out = "study,method_a,method_b,qualifying_trials,agreements,rate\n";
  for (size_t i = 0; i < r.methods.size(); ++i)
    for (size_t k = i + 1; k < r.methods.size(); ++k)
      out += "agreement," + r.methods[i] + ',' + r.methods[k] + ',' +
             std::to_string(r.qualifying_trials) + ',' +
             std::to_string(r.agree[i][k]) + ',' +
             report_detail::sci5(r.agreement_rate(i, k)) + '\n';
  return out;
}

inline nlohmann::ordered_json to_json(const SingleStepReport& r) {
  nlohmann::ordered_json j;
  j["study"] = "single-step";
  j["config"] = report_detail::config_json(r.config);
  j["generated_trials"] = r.generated_trials;
  j["paradox_trials"] = r.paradox_trials;
  j["confirmed_at_first_step"] = r.confirmed_at_first_step;
  j["confirmation_rate_all_trials"] =
      report_detail::sci5(r.confirmation_rate_all_trials());
  j["confirmation_rate_paradox_trials"] =
      report_detail::sci5(r.confirmation_rate_paradox_trials());
  j["both_defined"] = r.both_defined;
  j["winners_agree"] = r.winners_agree;
  j["anomaly"] = r.anomaly;
  return j;
}

inline std::string to_csv(const SingleStepReport& r) {
  return "study,paradox_trials,confirmed_at_first_step,confirmation_rate_all_trials,"
         "both_defined,winners_agree\n"
         "single-step," + std::to_string(r.paradox_trials) + ',' +
         std::to_string(r.confirmed_at_first_step) + ',' +
         report_detail::sci5(r.confirmation_rate_all_trials()) + ',' +
         std::to_string(r.both_defined) + ',' + std::to_string(r.winners_agree) + '\n';
}

}  // namespace electlab
