/*
 * Copyright 2026 The martbel authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Batch front-end: read market/assessment JSON, run any pipeline stage,
// emit JSON or aligned-table reports.
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 domain error (with a
// machine-readable error JSON on stderr).

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "martbel/golden.hpp"
#include "martbel/martbel.hpp"

namespace {

using martbel::Int;
using martbel::Rat;
using nlohmann::json;

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string error_type(const std::exception& e) {
    using namespace martbel;
    if (dynamic_cast<const InvalidMass*>(&e)) return "InvalidMass";
    if (dynamic_cast<const NotACapacity*>(&e)) return "NotACapacity";
    if (dynamic_cast<const NotBelief*>(&e)) return "NotBelief";
    if (dynamic_cast<const TooLarge*>(&e)) return "TooLarge";
    if (dynamic_cast<const NotViable*>(&e)) return "NotViable";
    if (dynamic_cast<const DegenerateRate*>(&e)) return "DegenerateRate";
    if (dynamic_cast<const LengthMismatch*>(&e)) return "LengthMismatch";
    if (dynamic_cast<const NoUpperPrices*>(&e)) return "NoUpperPrices";
    if (dynamic_cast<const EpsOutOfRange*>(&e)) return "EpsOutOfRange";
    if (dynamic_cast<const NotEquivalent*>(&e)) return "NotEquivalent";
    if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const NotConverged*>(&e)) return "NotConverged";
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    return "Error";
}

void emit_error(const std::string& type, const std::string& message) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

json read_json(const std::string& path) {
    try {
        if (path == "-") return json::parse(std::cin);
        std::ifstream in(path);
        if (!in) throw CliError("cannot open input file: " + path);
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw CliError(std::string("JSON parse failure: ") + e.what());
    }
}

/// Table rendering is a pure formatting of the JSON report: one aligned
/// "label  value" row per leaf, subset keys concatenated ("234"), rational
/// strings optionally re-rendered over a common denominator.
std::string format_scalar(const json& v, const Int& denom) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (denom > 0) {
            try {
                return martbel::to_string_with_denominator(martbel::parse_rational(s), denom);
            } catch (const martbel::ParseError&) {
                // not a rational; fall through
            }
        }
        return s;
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

void collect_rows(const json& j, const std::string& prefix, const Int& denom, bool in_values,
                  std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            std::string label = key;
            if (in_values) label.erase(std::remove(label.begin(), label.end(), ','), label.end());
            const std::string next = prefix.empty() ? label : prefix + "." + label;
            collect_rows(value, next, denom, key == "values", rows);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            collect_rows(j[i], prefix + "[" + std::to_string(i) + "]", denom, false, rows);
        }
    } else {
        rows.emplace_back(prefix, format_scalar(j, denom));
    }
}

std::string render_table(const json& report, const Int& denom) {
    std::vector<std::pair<std::string, std::string>> rows;
    collect_rows(report, "", denom, false, rows);
    std::size_t width = 0;
    for (const auto& [label, value] : rows) width = std::max(width, label.size());
    std::ostringstream out;
    for (const auto& [label, value] : rows) {
        out << label << std::string(width - label.size() + 2, ' ') << value << "\n";
    }
    return out.str();
}

struct Options {
    std::string format = "json";
    std::string output = "-";
    std::string denominator;
};

void write_report(const json& report, const Options& opts) {
    Int denom = 0;
    if (!opts.denominator.empty()) denom = Int(opts.denominator);
    const std::string text =
        opts.format == "table" ? render_table(report, denom) : report.dump(2) + "\n";
    if (opts.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(opts.output);
        if (!out) throw CliError("cannot open output file: " + opts.output);
        out << text;
    }
}

std::vector<Rat> parse_rat_list(const std::string& text) {
    std::vector<Rat> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(martbel::parse_rational(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

martbel::ApproxProblem make_problem(const martbel::MarketModel& model, const std::string& kind,
                                    const std::string& distance) {
    martbel::ApproxProblem problem;
    problem.model = model;
    problem.kind = kind == "strong" ? martbel::ApproxKind::StrongMartingale
                                    : martbel::ApproxKind::Martingale;
    problem.distance =
        distance == "d2" ? martbel::ApproxDistance::D2 : martbel::ApproxDistance::D1;
    return problem;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"martbel: lower envelopes of martingale measures, Dutch-book/no-arbitrage "
                 "certificates, and inner-approximating Choquet pricing rules"};
    app.require_subcommand(1);

    Options opts;
    app.add_option("--format", opts.format, "Report format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    app.add_option("--output,-o", opts.output, "Output path ('-' for stdout)")
        ->capture_default_str();
    app.add_option("--denominator", opts.denominator,
                   "Render table rationals over this common denominator (e.g. 105)");

    std::string input;
    std::string payoff_text;
    std::string kind = "martingale";
    std::string distance = "d1";
    std::string eps_text = "1/2";
    std::string q0_path;
    std::string bel_path;
    bool expect_consistent = false;
    unsigned seed = 12345;

    auto* envelope_cmd =
        app.add_subcommand("envelope", "Lower envelope of the martingale measures");
    envelope_cmd->add_option("input", input, "Market config JSON")->required();

    auto* mobius_cmd = app.add_subcommand("mobius", "Moebius mass of the lower envelope");
    mobius_cmd->add_option("input", input, "Market config JSON")->required();

    auto* decompose_cmd =
        app.add_subcommand("decompose", "Necessity decomposition of the lower envelope");
    decompose_cmd->add_option("input", input, "Market config JSON")->required();

    auto* interval_cmd = app.add_subcommand("interval", "No-arbitrage price interval");
    interval_cmd->add_option("input", input, "Market config JSON")->required();
    interval_cmd->add_option("--payoff", payoff_text,
                             "Comma-separated payoff per state (default: the stock)");

    auto* dutchbook_cmd =
        app.add_subcommand("dutchbook", "Generalized avoiding-Dutch-book certificate");
    dutchbook_cmd->add_option("input", input, "Assessment JSON")->required();
    dutchbook_cmd->add_flag("--expect-consistent", expect_consistent,
                            "Exit 2 unless the verdict is Consistent");

    auto* noarb_cmd = app.add_subcommand("noarb", "Generalized no-arbitrage certificate");
    noarb_cmd->add_option("input", input, "Assessment JSON")->required();
    noarb_cmd->add_flag("--expect-consistent", expect_consistent,
                        "Exit 2 unless the verdict is Consistent");

    auto* approx_cmd = app.add_subcommand("approx", "Inner-approximating belief function");
    approx_cmd->add_option("input", input, "Market config JSON")->required();
    approx_cmd->add_option("--kind", kind, "martingale|strong")
        ->check(CLI::IsMember({"martingale", "strong"}))
        ->capture_default_str();
    approx_cmd->add_option("--distance", distance, "d1|d2")
        ->check(CLI::IsMember({"d1", "d2"}))
        ->capture_default_str();
    approx_cmd->add_option("--seed", seed, "Multi-start seed for d2")->capture_default_str();

    auto* contaminate_cmd =
        app.add_subcommand("contaminate", "Epsilon-contaminated equivalent approximation");
    contaminate_cmd->add_option("input", input, "Market config JSON")->required();
    contaminate_cmd->add_option("--eps", eps_text, "Contamination weight in (0,1)")
        ->capture_default_str();
    contaminate_cmd->add_option("--q0", q0_path,
                                "Mixing probability as set-function JSON (default: average of "
                                "the extreme points)");
    contaminate_cmd->add_option("--bel", bel_path,
                                "Target belief as set-function JSON (default: the d1 optimum)");
    contaminate_cmd->add_option("--kind", kind, "martingale|strong (for the default target)")
        ->check(CLI::IsMember({"martingale", "strong"}))
        ->capture_default_str();

    auto* verify_cmd =
        app.add_subcommand("verify-paper", "Run the embedded golden suite of worked examples");
    (void)verify_cmd;

    // Let --format/--output/--denominator appear after the verb as well.
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) emit_error("CliUsage", e.what());
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (envelope_cmd->parsed()) {
            const auto model = martbel::io::market_from_json(read_json(input));
            write_report(martbel::io::set_function_to_json(martbel::lower_envelope(model)), opts);
        } else if (mobius_cmd->parsed()) {
            const auto model = martbel::io::market_from_json(read_json(input));
            write_report(martbel::io::set_function_to_json(martbel::envelope_moebius(model)),
                         opts);
        } else if (decompose_cmd->parsed()) {
            const auto model = martbel::io::market_from_json(read_json(input));
            const auto dec = martbel::necessity_decomposition(model);
            write_report(json{{"alpha", martbel::to_string(dec.alpha)},
                              {"n1", martbel::io::set_function_to_json(dec.n1)},
                              {"n2", martbel::io::set_function_to_json(dec.n2)}},
                         opts);
        } else if (interval_cmd->parsed()) {
            const auto model = martbel::io::market_from_json(read_json(input));
            const martbel::RandomVariable x =
                payoff_text.empty() ? model.stock_payoff()
                                    : martbel::RandomVariable(model.space,
                                                              parse_rat_list(payoff_text));
            const auto [lo, hi] = martbel::price_interval(model, x);
            json payoff = json::array();
            for (const Rat& v : x.payoff) payoff.push_back(martbel::to_string(v));
            write_report(json{{"payoff", payoff},
                              {"lower_price", martbel::to_string(lo)},
                              {"upper_price", martbel::to_string(hi)}},
                         opts);
        } else if (dutchbook_cmd->parsed() || noarb_cmd->parsed()) {
            const auto assessment = martbel::io::assessment_from_json(read_json(input));
            const martbel::Certificate cert = dutchbook_cmd->parsed()
                                                  ? martbel::check_dutch_book(assessment)
                                                  : martbel::check_no_arbitrage(assessment);
            write_report(martbel::io::certificate_to_json(assessment, cert), opts);
            if (expect_consistent && cert.verdict != martbel::Verdict::Consistent) {
                emit_error("InconsistentAssessment",
                           std::string("expected Consistent, got ") +
                               martbel::to_string(cert.verdict));
                return 2;
            }
        } else if (approx_cmd->parsed()) {
            const auto model = martbel::io::market_from_json(read_json(input));
            const auto problem = make_problem(model, kind, distance);
            martbel::ApproxOptions options;
            options.seed = seed;
            const martbel::ApproxResult res =
                problem.kind == martbel::ApproxKind::StrongMartingale
                    ? martbel::solve_strong(problem, options)
                    : martbel::solve_inner(problem, options);
            write_report(martbel::io::approx_result_to_json(res), opts);
        } else if (contaminate_cmd->parsed()) {
            const auto model = martbel::io::market_from_json(read_json(input));
            const Rat eps = martbel::parse_rational(eps_text);
            const martbel::SetFunction q0 =
                q0_path.empty() ? martbel::default_q0(model)
                                : martbel::io::set_function_from_json(read_json(q0_path));
            martbel::SetFunction bel;
            if (bel_path.empty()) {
                auto problem = make_problem(model, kind, "d1");
                martbel::ApproxOptions options;
                options.detect_uniqueness = false;
                bel = (problem.kind == martbel::ApproxKind::StrongMartingale
                           ? martbel::solve_strong(problem, options)
                           : martbel::solve_inner(problem, options))
                          .belief;
            } else {
                bel = martbel::io::set_function_from_json(read_json(bel_path));
            }
            const martbel::SetFunction mixed = martbel::epsilon_contaminate(q0, bel, eps);
            write_report(json{{"eps", martbel::to_string(eps)},
                              {"q0", martbel::io::set_function_to_json(q0)},
                              {"bel", martbel::io::set_function_to_json(bel)},
                              {"contaminated", martbel::io::set_function_to_json(mixed)}},
                         opts);
        } else if (verify_cmd->parsed()) {
            const auto checks = martbel::golden::run_all();
            json matrix = json::array();
            bool all_pass = true;
            for (const auto& c : checks) {
                all_pass = all_pass && c.pass;
                matrix.push_back(json{{"check", c.name},
                                      {"result", c.pass ? "pass" : "fail"},
                                      {"detail", c.detail}});
            }
            write_report(json{{"checks", matrix}, {"all_pass", all_pass}}, opts);
            if (!all_pass) {
                emit_error("GoldenCheckFailure", "one or more embedded golden checks failed");
                return 2;
            }
        }
    } catch (const CliError& e) {
        emit_error("IoError", e.what());
        return 1;
    } catch (const martbel::ParseError& e) {
        emit_error("ParseError", e.what());
        return 1;
    } catch (const martbel::Error& e) {
        emit_error(error_type(e), e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error("Error", e.what());
        return 2;
    }
    return 0;
}
