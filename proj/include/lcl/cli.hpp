#pragma once

// Command-line entry point. Subcommands:
//   classify  — compute the depth and complexity class of a problem
//   solve     — label a tree using the classification certificate
//   verify    — check a labeling against a problem
//   gen       — emit test trees (complete, hairy, random, lowerbound)
//   automaton — DOT export of a path-form automaton
//
// Exit codes: 0 success, 1 input error, 2 semantic negative (unsolvable
// problem, labeling violations).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcl/automaton.hpp"
#include "lcl/classify.hpp"
#include "lcl/core.hpp"
#include "lcl/decompose.hpp"
#include "lcl/parser.hpp"
#include "lcl/solve.hpp"
#include "lcl/trees.hpp"
#include "lcl/trim.hpp"
#include "lcl/version.hpp"

namespace lcl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNegative = 2;

namespace detail {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline ParsedProblem load_problem(const std::string& path, std::ostream& err) {
    std::string text = slurp(path);
    ParsedProblem parsed =
        ends_with(path, ".json") ? parse_problem_json(text) : parse_problem(text);
    for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
    return parsed;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest_of(const Problem& p) {
    std::ostringstream hex;
    hex << std::hex << fnv1a(serialize_problem(p));
    return hex.str();
}

inline nlohmann::ordered_json names_of(const std::vector<LabelId>& ids,
                                       const std::vector<std::string>& alphabet) {
    auto arr = nlohmann::ordered_json::array();
    for (LabelId id : ids) arr.push_back(alphabet[id]);
    return arr;
}

inline nlohmann::ordered_json multiset_json(const LabelMultiset& m,
                                            const std::vector<std::string>& alphabet) {
    return names_of(m.entries, alphabet);
}

inline nlohmann::ordered_json sequence_json(const GoodSequence& seq,
                                            const std::vector<std::string>& alphabet) {
    nlohmann::ordered_json j;
    j["stabilized"] = seq.stabilized;
    if (seq.rooted) {
        auto rl = nlohmann::ordered_json::array();
        for (LabelSet s : seq.r_layers) rl.push_back(names_of(set_to_vector(s), alphabet));
        j["r_layers"] = rl;
        auto cl = nlohmann::ordered_json::array();
        for (LabelSet s : seq.c_layers) cl.push_back(names_of(set_to_vector(s), alphabet));
        j["c_layers"] = cl;
    } else {
        auto vl = nlohmann::ordered_json::array();
        for (const auto& layer : seq.v_layers) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& c : layer) arr.push_back(multiset_json(c, alphabet));
            vl.push_back(arr);
        }
        j["v_layers"] = vl;
        auto dl = nlohmann::ordered_json::array();
        for (const auto& layer : seq.d_layers) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& c : layer) arr.push_back(multiset_json(c, alphabet));
            dl.push_back(arr);
        }
        j["d_layers"] = dl;
    }
    j["flexibility"] = seq.flexibility;
    return j;
}

inline const std::vector<std::string>& alphabet_of(const Problem& p) {
    if (std::holds_alternative<RootedProblem>(p)) return std::get<RootedProblem>(p).alphabet;
    return std::get<UnrootedProblem>(p).alphabet;
}

inline std::string label_set_text(LabelSet s, const std::vector<std::string>& alphabet) {
    std::string out = "{";
    bool first = true;
    for (LabelId id : set_to_vector(s)) {
        if (!first) out += ",";
        out += alphabet[id];
        first = false;
    }
    return out + "}";
}

inline std::string config_set_text(const std::vector<LabelMultiset>& cs,
                                   const std::vector<std::string>& alphabet) {
    std::string out = "{";
    for (size_t i = 0; i < cs.size(); ++i)
        out += (i ? " " : "") + multiset_text(cs[i], alphabet);
    return out + "}";
}

// Walks the witness chain again, printing the trim traces and component
// reports that produced each layer.
inline void explain(const Problem& prob, const GoodSequence& seq, std::ostream& out) {
    const auto& alphabet = alphabet_of(prob);
    if (seq.rooted) {
        const auto& p = std::get<RootedProblem>(prob);
        LabelSet current = p.all_labels();
        for (int i = 0; i < seq.length(); ++i) {
            auto [trimmed, trace] = trim_rooted(p, current);
            out << "layer " << (i + 1) << ": trim";
            for (LabelSet s : trace.sigma_sequence) out << " " << label_set_text(s, alphabet);
            out << "\n";
            auto m = build_rooted_automaton(p, trimmed);
            auto report = analyze_rooted(m);
            for (const auto& c : report.components) {
                out << "  component " << label_set_text(set_from_vector(c.members_rooted), alphabet)
                    << (c.flexible ? " flexible, K=" + std::to_string(c.flexibility_index)
                                   : std::string(" inflexible"))
                    << "\n";
            }
            if (i < static_cast<int>(seq.c_layers.size())) current = seq.c_layers[i];
        }
        if (seq.stabilized) out << "stabilized: the last layer repeats indefinitely\n";
    } else {
        const auto& p = std::get<UnrootedProblem>(prob);
        std::vector<LabelMultiset> current = p.node_configs;
        for (int i = 0; i < seq.length(); ++i) {
            auto [trimmed, trace] = trim_unrooted(p, current);
            out << "layer " << (i + 1) << ": trim";
            for (LabelSet s : trace.sigma_sequence) out << " " << label_set_text(s, alphabet);
            out << " -> " << config_set_text(trimmed, alphabet) << "\n";
            auto ua = build_unrooted_automaton(p, trimmed);
            auto report = analyze_unrooted(ua.d_set, ua.automaton);
            for (const auto& c : report.components) {
                out << "  component " << config_set_text(c.members_unrooted, alphabet)
                    << (c.flexible ? " flexible, K=" + std::to_string(c.flexibility_index)
                                   : std::string(" inflexible"))
                    << "\n";
            }
            if (i < static_cast<int>(seq.d_layers.size()))
                current = restrict_unrooted(trimmed, seq.d_layers[i]);
        }
        if (seq.stabilized) out << "stabilized: the last layer repeats indefinitely\n";
    }
}

inline Tree generate_from_spec(const std::string& spec);

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"LCL classifier and solver for regular trees"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // classify
    std::string cls_problem;
    bool cls_json = false, cls_all = false, cls_explain = false, cls_stable = false;
    auto* cls = app.add_subcommand("classify", "compute depth and complexity class");
    cls->add_option("problem", cls_problem, "problem file")->required();
    cls->add_flag("--json", cls_json, "JSON verdict document");
    cls->add_flag("--all-sequences", cls_all, "include every maximal good sequence");
    cls->add_flag("--explain", cls_explain, "print trim traces and component reports");
    cls->add_flag("--stable", cls_stable, "omit timing for byte-stable output");

    // solve
    std::string sol_problem, sol_tree, sol_gen, sol_out;
    auto* sol = app.add_subcommand("solve", "label a tree using the certificate");
    sol->add_option("problem", sol_problem, "problem file")->required();
    sol->add_option("tree", sol_tree, "tree file");
    sol->add_option("--gen", sol_gen, "generate the tree instead (same spec as gen)");
    sol->add_option("--out", sol_out, "write the labeling here (default stdout)");

    // verify
    std::string ver_problem, ver_tree, ver_labeling;
    auto* ver = app.add_subcommand("verify", "check a labeling");
    ver->add_option("problem", ver_problem, "problem file")->required();
    ver->add_option("tree", ver_tree, "tree file")->required();
    ver->add_option("labeling", ver_labeling, "labeling file")->required();

    // gen
    std::string gen_kind;
    bool gen_rooted = false, gen_starred = false, gen_annotate = false;
    int gen_delta = 3, gen_height = 2, gen_k = 1, gen_t = 1, gen_n = 15;
    int gen_gamma_hat = 2, gen_sigma = 2, gen_path_len = 0;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a tree");
    gen->add_option("kind", gen_kind, "complete|hairy|random|lowerbound")->required();
    gen->add_flag("--rooted", gen_rooted, "rooted tree (default unrooted)");
    gen->add_option("--delta", gen_delta, "degree parameter");
    gen->add_option("--height", gen_height, "height (complete)");
    gen->add_flag("--starred", gen_starred, "starred complete tree");
    gen->add_option("--k", gen_k, "depth parameter (hairy length / lowerbound k)");
    gen->add_option("--t", gen_t, "round parameter (lowerbound)");
    gen->add_option("--n", gen_n, "target size (random)");
    gen->add_option("--gamma-hat", gen_gamma_hat, "rake-tree height (lowerbound)");
    gen->add_option("--sigma", gen_sigma, "alphabet size driving the path length (lowerbound)");
    gen->add_option("--path-len", gen_path_len, "explicit compress path length (lowerbound)");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_flag("--annotate", gen_annotate, "emit layer/role annotations");

    // automaton
    std::string aut_problem, aut_set = "all";
    auto* aut = app.add_subcommand("automaton", "DOT export of the path-form automaton");
    aut->add_option("problem", aut_problem, "problem file")->required();
    aut->add_option("--set", aut_set, "all | trim | layer:<i>");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*cls) {
            auto t0 = std::chrono::steady_clock::now();
            auto parsed = detail::load_problem(cls_problem, err);
            DepthResult res = parsed.is_rooted() ? compute_depth(parsed.rooted())
                                                 : compute_depth(parsed.unrooted());
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            const auto& alphabet = detail::alphabet_of(parsed.problem);
            if (cls_json) {
                nlohmann::ordered_json j;
                j["tool"] = "lcl";
                j["version"] = kVersion;
                j["problem"] = {{"kind", parsed.is_rooted() ? "rooted" : "unrooted"},
                                {"digest", detail::digest_of(parsed.problem)}};
                if (res.kind == DepthKind::infinite) j["depth"] = "infinity";
                else j["depth"] = res.k;
                j["class"] = res.verdict;
                if (res.kind == DepthKind::infinite)
                    j["note"] = "lower classes not distinguished";
                if (res.witness) j["witness"] = detail::sequence_json(*res.witness, alphabet);
                j["sequences_truncated"] = res.sequences_truncated;
                if (cls_all) {
                    auto arr = nlohmann::ordered_json::array();
                    for (const auto& s : res.all_maximal_sequences)
                        arr.push_back(detail::sequence_json(s, alphabet));
                    j["all_sequences"] = arr;
                }
                if (!cls_stable) j["timing_ms"] = ms;
                out << j.dump(2) << "\n";
            } else {
                if (res.kind == DepthKind::infinite) out << "depth: infinity\n";
                else out << "depth: " << res.k << "\n";
                out << "class: " << res.verdict << "\n";
                if (res.witness && !cls_stable)
                    out << "sequences: " << res.all_maximal_sequences.size()
                        << (res.sequences_truncated ? "+ (truncated)" : "") << "\n";
                if (cls_explain && res.witness) detail::explain(parsed.problem, *res.witness, out);
            }
            return res.kind == DepthKind::unsolvable ? kExitNegative : kExitOk;
        }

        if (*sol) {
            auto parsed = detail::load_problem(sol_problem, err);
            if (sol_tree.empty() == sol_gen.empty())
                throw std::runtime_error("solve needs exactly one of <tree> or --gen");
            Tree tree = sol_tree.empty() ? detail::generate_from_spec(sol_gen)
                                         : parse_tree(detail::slurp(sol_tree));
            DepthResult res = parsed.is_rooted() ? compute_depth(parsed.rooted())
                                                 : compute_depth(parsed.unrooted());
            if (res.kind == DepthKind::unsolvable) {
                err << "problem is unsolvable; nothing to solve\n";
                return kExitNegative;
            }
            Labeling lab;
            SolveInfo info;
            if (parsed.is_rooted())
                std::tie(lab, info) = solve_with_certificate(parsed.rooted(), tree, *res.witness);
            else
                std::tie(lab, info) = solve_with_certificate(parsed.unrooted(), tree, *res.witness);
            err << "decomposition: gamma=" << info.gamma << " ell=" << info.ell
                << " L=" << info.L << " analytic_rounds=" << info.analytic_rounds << "\n";
            std::string text =
                serialize_labeling(tree, lab, detail::alphabet_of(parsed.problem));
            if (sol_out.empty()) {
                out << text;
            } else {
                std::ofstream f(sol_out, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write '" + sol_out + "'");
                f << text;
            }
            return kExitOk;
        }

        if (*ver) {
            auto parsed = detail::load_problem(ver_problem, err);
            Tree tree = parse_tree(detail::slurp(ver_tree));
            Labeling lab = parse_labeling(detail::slurp(ver_labeling), tree,
                                          detail::alphabet_of(parsed.problem));
            std::vector<std::string> violations;
            if (parsed.is_rooted()) violations = validate_labeling(parsed.rooted(), tree, lab);
            else violations = validate_labeling(parsed.unrooted(), tree, lab);
            for (const auto& v : violations) out << v << "\n";
            return violations.empty() ? kExitOk : kExitNegative;
        }

        if (*gen) {
            TreeKind kind = gen_rooted ? TreeKind::rooted : TreeKind::unrooted;
            Tree tree;
            if (gen_kind == "complete") {
                tree = complete_tree(kind, gen_delta, gen_height, gen_starred);
            } else if (gen_kind == "hairy") {
                tree = hairy_path(gen_k, gen_delta);
            } else if (gen_kind == "random") {
                tree = random_regular_tree(gen_n, kind, gen_delta, gen_seed);
            } else if (gen_kind == "lowerbound") {
                int s = gen_path_len > 0 ? gen_path_len
                                         : lower_bound_path_length(gen_t, gen_sigma);
                tree = gen_rooted
                           ? lower_bound_tree_rooted(gen_delta, gen_k, gen_t, gen_gamma_hat, s)
                           : lower_bound_tree_unrooted(gen_delta, gen_k, gen_t, gen_gamma_hat, s);
            } else {
                throw std::runtime_error("unknown tree kind '" + gen_kind + "'");
            }
            out << serialize_tree(tree, gen_annotate);
            return kExitOk;
        }

        if (*aut) {
            auto parsed = detail::load_problem(aut_problem, err);
            const auto& alphabet = detail::alphabet_of(parsed.problem);
            int layer = 0; // 0 = all, -1 = trim, i >= 1 = witness layer
            if (aut_set == "trim") layer = -1;
            else if (aut_set.rfind("layer:", 0) == 0) layer = std::stoi(aut_set.substr(6));
            else if (aut_set != "all") throw std::runtime_error("--set must be all|trim|layer:<i>");

            if (parsed.is_rooted()) {
                const auto& p = parsed.rooted();
                LabelSet labels = p.all_labels();
                if (layer == -1) labels = trim_rooted(p, labels).first;
                else if (layer >= 1) {
                    auto res = compute_depth(p);
                    if (!res.witness || layer > res.witness->length())
                        throw std::runtime_error("no such witness layer");
                    labels = res.witness->r_layers[layer - 1];
                }
                auto m = build_rooted_automaton(p, labels);
                out << to_dot(m, analyze_rooted(m), alphabet);
            } else {
                const auto& p = parsed.unrooted();
                std::vector<LabelMultiset> configs = p.node_configs;
                if (layer == -1) configs = trim_unrooted(p, configs).first;
                else if (layer >= 1) {
                    auto res = compute_depth(p);
                    if (!res.witness || layer > res.witness->length())
                        throw std::runtime_error("no such witness layer");
                    configs = res.witness->v_layers[layer - 1];
                }
                auto ua = build_unrooted_automaton(p, configs);
                out << to_dot(ua.automaton, analyze_unrooted(ua.d_set, ua.automaton), alphabet);
            }
            return kExitOk;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

namespace detail {

// Compact generation spec for `solve --gen`: comma-separated key=value pairs,
// e.g. "kind=complete,rooted=1,delta=2,height=3" or "kind=random,n=100,seed=7".
inline Tree generate_from_spec(const std::string& spec) {
    std::map<std::string, std::string> kv;
    std::string cur;
    std::istringstream in(spec);
    while (std::getline(in, cur, ',')) {
        auto eq = cur.find('=');
        if (eq == std::string::npos) throw std::runtime_error("bad --gen spec near '" + cur + "'");
        kv[cur.substr(0, eq)] = cur.substr(eq + 1);
    }
    auto get = [&](const std::string& key, int def) {
        auto it = kv.find(key);
        return it == kv.end() ? def : std::stoi(it->second);
    };
    std::string kind = kv.count("kind") ? kv["kind"] : "random";
    TreeKind tk = get("rooted", 0) ? TreeKind::rooted : TreeKind::unrooted;
    if (kind == "complete")
        return complete_tree(tk, get("delta", 3), get("height", 2), get("starred", 0));
    if (kind == "hairy") return hairy_path(get("k", 1), get("delta", 3));
    if (kind == "random")
        return random_regular_tree(get("n", 15), tk, get("delta", 3),
                                   static_cast<std::uint64_t>(get("seed", 1)));
    if (kind == "lowerbound") {
        int t = get("t", 1);
        int s = get("path-len", 0) > 0 ? get("path-len", 0)
                                       : lower_bound_path_length(t, get("sigma", 2));
        return tk == TreeKind::rooted
                   ? lower_bound_tree_rooted(get("delta", 2), get("k", 1), t, get("gamma-hat", 1), s)
                   : lower_bound_tree_unrooted(get("delta", 3), get("k", 1), t, get("gamma-hat", 2),
                                               s);
    }
    throw std::runtime_error("unknown --gen kind '" + kind + "'");
}

} // namespace detail

} // namespace lcl::cli
