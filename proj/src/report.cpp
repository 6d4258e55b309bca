#include "substdim/report.hpp"

#include <cmath>
#include <limits>

#include "substdim/errors.hpp"
#include "substdim/language.hpp"

namespace substdim {

json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& v) {
  if (v.is_string()) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("unexpected number string: " + v.dump());
  }
  return v.get<double>();
}

json substitution_to_json(const Substitution& theta) {
  json doc;
  json alphabet = json::array();
  for (Symbol a = 0; a < theta.alphabet_size(); ++a)
    alphabet.push_back(theta.alphabet.name(a));
  doc["alphabet"] = std::move(alphabet);
  json rules = json::object();
  for (Symbol a = 0; a < theta.alphabet_size(); ++a) {
    json image = json::array();
    for (Symbol s : theta.images[a]) image.push_back(theta.alphabet.name(s));
    rules[theta.alphabet.name(a)] = std::move(image);
  }
  doc["rules"] = std::move(rules);
  return doc;
}

Substitution substitution_from_json(const json& doc,
                                    bool require_constant_length) {
  if (!doc.is_object() || !doc.contains("alphabet") || !doc.contains("rules"))
    throw ParseError("substitution document needs 'alphabet' and 'rules'");
  std::vector<std::string> names;
  for (const auto& n : doc.at("alphabet")) names.push_back(n.get<std::string>());
  Alphabet alphabet{names};

  Substitution theta;
  theta.alphabet = alphabet;
  for (const auto& name : names) {
    if (!doc.at("rules").contains(name))
      throw ParseError("missing rule for letter '" + name + "'");
    const json& rhs = doc.at("rules").at(name);
    Word image;
    if (rhs.is_array()) {
      for (const auto& s : rhs) {
        const auto idx = alphabet.index_of(s.get<std::string>());
        if (!idx) throw ParseError("unknown symbol in rule for '" + name + "'");
        image.push_back(*idx);
      }
    } else {
      for (char ch : rhs.get<std::string>()) {
        const auto idx = alphabet.index_of(std::string_view(&ch, 1));
        if (!idx) throw ParseError("unknown symbol in rule for '" + name + "'");
        image.push_back(*idx);
      }
    }
    if (image.empty()) throw ParseError("empty image for '" + name + "'");
    theta.images.push_back(std::move(image));
  }
  if (require_constant_length && !theta.constant_length())
    throw ParseError("images do not all have the same length");
  return theta;
}

namespace {

json provenance_to_json(const BoundProvenance& p) {
  json doc;
  doc["theorem"] = p.theorem;
  doc["power"] = p.power;
  doc["power_length"] = p.power_length;
  doc["agreement"] = p.agreement;
  return doc;
}

}  // namespace

json bounds_to_json(const AcBounds& bounds) {
  json doc;
  doc["lower"] = json_number(bounds.lower);
  doc["upper"] = json_number(bounds.upper);
  doc["exact"] = bounds.exact ? json_number(*bounds.exact) : json(nullptr);
  if (bounds.lower_provenance)
    doc["lower_provenance"] = provenance_to_json(*bounds.lower_provenance);
  if (bounds.upper_provenance)
    doc["upper_provenance"] = provenance_to_json(*bounds.upper_provenance);
  return doc;
}

json classification_to_json(const ClassificationReport& report) {
  json doc;
  doc["verdict"] = to_string(report.verdict);
  doc["ac"] = bounds_to_json(report.bounds);

  json certs = json::object();
  if (report.finiteness_certificate) {
    const auto& fin = *report.finiteness_certificate;
    certs["finiteness"] = {{"period", fin.period},
                           {"witness_n", fin.witness_n},
                           {"cutoff", fin.cutoff},
                           {"complexity_profile", fin.complexity_profile}};
  }
  if (report.coincidence_certificate) {
    const auto& c = *report.coincidence_certificate;
    certs["coincidence"] = {{"k", c.k},
                            {"j", c.j},
                            {"digits", c.digits},
                            {"constant_value", c.constant_value}};
  }
  if (report.exhaustion_proof)
    certs["exhaustion"] = {
        {"reachable_masks", report.exhaustion_proof->reachable_masks}};
  if (report.reduced_substitution)
    certs["reduced_substitution"] =
        substitution_to_json(*report.reduced_substitution);
  doc["certificates"] = std::move(certs);

  json trace;
  trace["finiteness"] = {
      {"certified_finite", report.trace.finiteness.certified_finite},
      {"cutoff", report.trace.finiteness.cutoff},
      {"complexity_profile", report.trace.finiteness.complexity_profile}};
  trace["infinite_presumed"] = report.trace.infinite_presumed;
  if (report.trace.height) {
    trace["height"] = {{"h", report.trace.height->h},
                       {"return_time_gcd", report.trace.height->return_time_gcd},
                       {"gamma_h", report.trace.height->gamma_h}};
  }
  if (report.trace.pure_base_alphabet) {
    trace["pure_base"] = {{"alphabet_size", *report.trace.pure_base_alphabet},
                          {"identity", report.trace.pure_base_identity}};
  }
  if (report.trace.reduced_alphabet) {
    trace["reduction"] = {{"alphabet_size", *report.trace.reduced_alphabet},
                          {"changed", report.trace.reduction_changed}};
  }
  if (report.trace.coincidence_order)
    trace["coincidence_order"] = *report.trace.coincidence_order;
  if (report.trace.binary_formula_value)
    trace["binary_formula_value"] =
        json_number(*report.trace.binary_formula_value);
  doc["trace"] = std::move(trace);
  return doc;
}

json dimension_fit_to_json(const DimensionFit& fit) {
  json doc;
  doc["slope"] = fit.slope;
  doc["intercept"] = fit.intercept;
  doc["r_squared"] = fit.r_squared;
  doc["points_used"] = fit.points_used;
  doc["nu_range"] = {fit.nu_lo, fit.nu_hi};
  doc["stability_drift"] = fit.stability_drift;
  doc["sample_truncated"] = fit.sample_truncated;
  json table = json::array();
  for (std::size_t t = 0; t < fit.table.nu_grid.size(); ++t)
    table.push_back({{"nu", fit.table.nu_grid[t]}, {"count", fit.table.counts[t]}});
  doc["separation_table"] = std::move(table);
  doc["counts_are"] = "greedy-maximal";
  return doc;
}

json ifs_report_to_json(const IfsCheckReport& report) {
  json doc;
  doc["pieces"] = report.pieces;
  doc["contraction_pairs"] = report.contraction_pairs;
  doc["contraction_violations"] = report.contraction_violations;
  doc["contraction_lower_margin"] = report.contraction_lower_margin;
  doc["contraction_upper_margin"] = report.contraction_upper_margin;
  doc["ssc_gap"] = report.ssc_gap;
  doc["attractor_points"] = report.attractor_points;
  doc["attractor_ambiguous"] = report.attractor_ambiguous;
  doc["degenerate"] = report.degenerate;
  return doc;
}

json make_report_document(const std::string& command, const Substitution& theta,
                          const ClassificationReport& report,
                          const json& config_echo) {
  json doc;
  doc["tool"] = "substdim";
  doc["version"] = kToolVersion;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["substitution"] = substitution_to_json(theta);
  doc["config"] = config_echo;
  doc.update(classification_to_json(report));
  return doc;
}

namespace {

void check(VerifyResult& result, bool ok, const std::string& what) {
  if (ok) {
    result.checks.push_back(what + ": ok");
  } else {
    result.ok = false;
    result.failures.push_back(what + ": FAILED");
  }
}

}  // namespace

VerifyResult verify_document(const json& doc) {
  VerifyResult result;
  const Substitution theta = substitution_from_json(doc.at("substitution"));
  const std::string verdict = doc.at("verdict").get<std::string>();
  const json& certs = doc.at("certificates");

  if (verdict == "Finite") {
    if (!certs.contains("finiteness")) {
      check(result, false, "finiteness certificate present");
      return result;
    }
    const auto q = certs.at("finiteness").at("period").get<std::size_t>();
    const auto wn = certs.at("finiteness").at("witness_n").get<std::size_t>();
    const Word prefix =
        periodic_right_prefix(theta, std::max<std::size_t>(8 * q, 64));
    bool periodic = q >= 1;
    for (std::size_t t = 0; t + q < prefix.size() && periodic; ++t)
      periodic = prefix[t] == prefix[t + q];
    check(result, periodic, "periodicity witness (period " + std::to_string(q) + ")");
    check(result, wn >= 1 && language(theta, wn).words.size() <= wn,
          "Morse-Hedlund witness p(n) <= n");
    check(result, number_from_json(doc.at("ac").at("exact")) == 0.0,
          "ac = 0 for finite verdict");
    return result;
  }

  if (!certs.contains("reduced_substitution")) {
    check(result, false, "reduced substitution echoed");
    return result;
  }
  const Substitution reduced =
      substitution_from_json(certs.at("reduced_substitution"));

  if (verdict == "PartlyContinuous") {
    const auto claimed =
        certs.at("exhaustion").at("reachable_masks").get<std::vector<std::uint64_t>>();
    const CoincidenceResult replay = find_coincidence(reduced);
    check(result, !replay.has_coincidence(), "exhaustion: no coincidence exists");
    check(result,
          replay.exhaustion && replay.exhaustion->reachable_masks == claimed,
          "exhaustion: reachable-subset closure matches");
    check(result,
          std::isinf(number_from_json(doc.at("ac").at("exact"))),
          "ac = inf for partly continuous verdict");
    return result;
  }

  if (verdict != "DiscreteInfinite") {
    check(result, false, "known verdict");
    return result;
  }

  const json& cert = certs.at("coincidence");
  const auto k = cert.at("k").get<unsigned>();
  const auto digits = cert.at("digits").get<std::vector<std::uint32_t>>();
  const auto value = cert.at("constant_value").get<Symbol>();
  bool constant = digits.size() == k;
  for (Symbol a = 0; a < reduced.alphabet_size() && constant; ++a) {
    Symbol x = a;
    for (std::uint32_t d : digits) x = reduced.images[x][d];
    constant = x == value;
  }
  check(result, constant, "coincidence composition is constant");
  unsigned __int128 j = 0;
  for (std::uint32_t d : digits) j = j * reduced.length() + d;
  check(result, j == cert.at("j").get<std::uint64_t>(),
        "coincidence position matches digits");

  // Bound arithmetic replays from the provenance integers alone.
  auto replay_bound = [&](const char* side) {
    const json& prov = doc.at("ac").at(std::string(side) + "_provenance");
    const auto len = prov.at("power_length").get<std::uint64_t>();
    const auto agreement = prov.at("agreement").get<std::uint64_t>();
    const double expect = log_dimension_value(len, len - agreement);
    const double got = number_from_json(doc.at("ac").at(side));
    check(result, std::abs(expect - got) <= 1e-12,
          std::string("bound arithmetic (") + side + ")");
    // The stated agreement count must match the DP at that power.
    const auto power = prov.at("power").get<unsigned>();
    const auto stats = agreement_stats(reduced, power);
    const bool is_lower = std::string(side) == "lower";
    check(result, (is_lower ? stats.C : stats.c) == agreement,
          std::string("agreement count replay (") + side + ")");
  };
  replay_bound("lower");
  replay_bound("upper");
  const double lower = number_from_json(doc.at("ac").at("lower"));
  const double upper = number_from_json(doc.at("ac").at("upper"));
  check(result, 1.0 <= lower && lower <= upper && std::isfinite(upper),
        "1 <= lower <= upper < inf");
  return result;
}

}  // namespace substdim
