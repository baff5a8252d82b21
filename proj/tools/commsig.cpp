// Command-line surface for the commsig library: synthetic benchmark
// generation, group scoring and ranking, Louvain detection, ranking
// evaluation, membership scores, and group-graph edge significance.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commsig/commsig.hpp"

namespace {

using namespace commsig;
using nlohmann::json;

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

// Every output file starts with the effective run configuration, so a rerun
// of the same config reproduces the file byte for byte.
void write_config_header(std::ostream& out, const std::string& command, const json& config) {
    out << "# commsig " << command << " v1\n";
    out << "# config " << config.dump() << "\n";
}

LoadOptions load_options(const std::string& weight_mode, bool allow_self_loops) {
    LoadOptions opts;
    if (weight_mode == "unweighted")
        opts.weight_mode = WeightMode::unweighted;
    else if (weight_mode == "integer")
        opts.weight_mode = WeightMode::integer_weights;
    else if (weight_mode == "round")
        opts.weight_mode = WeightMode::round_to_integer;
    else
        throw CLI::ValidationError("--weight-mode must be unweighted|integer|round");
    opts.allow_self_loops = allow_self_loops;
    return opts;
}

SyntheticSpec preset_spec(const std::string& preset, const std::vector<Count>& sizes,
                          const std::vector<double>& probs, double noise, std::uint64_t seed) {
    if (!preset.empty()) {
        if (preset == "syn1") return syn1_preset(noise, seed);
        if (preset == "syn2") return syn2_preset(noise, seed);
        if (preset == "syn3") return syn3_preset(noise, seed);
        throw CLI::ValidationError("--preset must be syn1|syn2|syn3");
    }
    if (sizes.empty()) throw CLI::ValidationError("need --preset or --sizes/--probs");
    SyntheticSpec spec;
    spec.group_sizes = sizes;
    spec.internal_probs = probs;
    spec.noise_prob = noise;
    spec.seed = seed;
    return spec;
}

std::vector<double> parse_sweep(const std::string& sweep) {
    double lo, hi, step;
    if (std::sscanf(sweep.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
        throw CLI::ValidationError("--noise-sweep expects LO:HI:STEP");
    std::vector<double> noises;
    for (double x = lo; x <= hi + 1e-12; x += step) noises.push_back(x);
    return noises;
}

std::pair<Count, Count> parse_size_range(const std::string& range) {
    long long lo, hi;
    if (std::sscanf(range.c_str(), "%lld:%lld", &lo, &hi) != 2 || lo < 1 || hi < lo)
        throw CLI::ValidationError("--size-range expects LO:HI");
    return {lo, hi};
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::binomial, Method::binomial_lower, Method::binomial_edge,
                     Method::binomial_global, Method::binomial_exact, Method::pvalue,
                     Method::modularity, Method::conductance, Method::tpr, Method::size})
        if (name == to_string(m)) return m;
    throw CLI::ValidationError("unknown method: " + name);
}

// ---------------------------------------------------------------------------
// score / rank

struct ScoreRow {
    GroupStats stats;
    BinomialScore node, edge, global;
    double pvalue = 0.0;
    BaselineVector baselines;
    BinomialScore selected;
    double selected_score = 0.0;
};

ScoreRow score_one(const Graph& graph, const Group& group, const std::string& model,
                   Count exact_threshold, GroupScratch& scratch) {
    ScoreRow row;
    row.stats = group_stats(graph, group, scratch);
    row.node = score_node_based(row.stats, graph.node_count(), {exact_threshold});
    row.edge = score_edge_based(row.stats, {exact_threshold});
    row.global = score_global(row.stats, graph.node_count(), {exact_threshold});
    row.pvalue = pvalue_bound_he(row.stats.deg, row.stats.din, graph.edge_count());
    row.baselines.modularity_q = modularity_groupwise(row.stats, graph.edge_count());
    row.baselines.conductance = conductance(row.stats, graph.edge_count());
    row.baselines.tpr = tpr(graph, group, scratch);
    row.baselines.size = group.size();

    if (model == "node") {
        row.selected = row.node;
        row.selected_score = row.node.score;
    } else if (model == "edge") {
        row.selected = row.edge;
        row.selected_score = row.edge.score;
    } else if (model == "global") {
        row.selected = row.global;
        row.selected_score = row.global.score;
    } else if (model == "lower") {
        row.selected = row.node;
        row.selected_score = row.node.significant ? row.node.lscore : 0.0;
    } else if (model == "max") {
        row.selected = row.node.score >= row.edge.score ? row.node : row.edge;
        row.selected_score = row.selected.score;
    } else if (model == "pvalue") {
        row.selected = BinomialScore{};
        row.selected_score = row.pvalue;
    } else {
        throw CLI::ValidationError("--model must be node|edge|global|pvalue|lower|max");
    }
    return row;
}

const char* kScoreColumns =
    "id,size,deg,din,p_node,p_edge,q,intensity_node,intensity_edge,score,label,"
    "lscore,uscore,rel_error,used_exact,score_node,score_edge,score_global,"
    "score_pvalue,modularity,conductance,tpr";

void write_score_row(std::ostream& out, const std::string& id, const ScoreRow& row,
                     bool jsonl) {
    // The label bands expect a nonnegative score; the raw He bound may be
    // negative, so label on its clamped value.
    double label_score = std::max(0.0, row.selected_score);
    const char* label = to_string(significance_label(label_score));
    std::string rel = row.selected.rel_error_bound ? fmt(*row.selected.rel_error_bound) : "";
    if (jsonl) {
        nlohmann::ordered_json obj;
        obj["id"] = id;
        obj["size"] = row.stats.size;
        obj["deg"] = row.stats.deg;
        obj["din"] = row.stats.din;
        obj["p_node"] = row.stats.p_node;
        obj["p_edge"] = row.stats.p_edge;
        obj["q"] = row.stats.q;
        obj["intensity_node"] = row.stats.intensity(NullModel::node);
        obj["intensity_edge"] = row.stats.intensity(NullModel::edge);
        obj["score"] = row.selected_score;
        obj["label"] = label;
        obj["lscore"] = row.selected.lscore;
        obj["uscore"] = row.selected.uscore;
        if (row.selected.rel_error_bound) obj["rel_error"] = *row.selected.rel_error_bound;
        obj["used_exact"] = row.selected.used_exact;
        obj["score_node"] = row.node.score;
        obj["score_edge"] = row.edge.score;
        obj["score_global"] = row.global.score;
        obj["score_pvalue"] = row.pvalue;
        obj["modularity"] = row.baselines.modularity_q;
        obj["conductance"] = row.baselines.conductance;
        obj["tpr"] = row.baselines.tpr;
        out << obj.dump() << '\n';
        return;
    }
    out << id << ',' << row.stats.size << ',' << row.stats.deg << ',' << row.stats.din << ','
        << fmt(row.stats.p_node) << ',' << fmt(row.stats.p_edge) << ',' << fmt(row.stats.q)
        << ',' << fmt(row.stats.intensity(NullModel::node)) << ','
        << fmt(row.stats.intensity(NullModel::edge)) << ',' << fmt(row.selected_score) << ','
        << label << ',' << fmt(row.selected.lscore) << ',' << fmt(row.selected.uscore) << ','
        << rel << ',' << (row.selected.used_exact ? 1 : 0) << ',' << fmt(row.node.score) << ','
        << fmt(row.edge.score) << ',' << fmt(row.global.score) << ',' << fmt(row.pvalue) << ','
        << fmt(row.baselines.modularity_q) << ',' << fmt(row.baselines.conductance) << ','
        << fmt(row.baselines.tpr) << '\n';
}

struct ScoreArgs {
    std::string graph_path, groups_path, out_path;
    std::string model = "node";
    std::string weight_mode = "unweighted";
    bool allow_self_loops = false;
    bool jsonl = false;
    Count exact_threshold = 50;
    unsigned threads = 0;
};

void add_score_flags(CLI::App* cmd, ScoreArgs& args) {
    cmd->add_option("--graph", args.graph_path, "edge-list file")->required();
    cmd->add_option("--groups", args.groups_path, "group file (JSONL or TSV)")->required();
    cmd->add_option("--model", args.model, "node|edge|global|pvalue|lower|max");
    cmd->add_option("--exact-threshold", args.exact_threshold, "exact tail when deg <= N");
    cmd->add_option("--weight-mode", args.weight_mode, "unweighted|integer|round");
    cmd->add_flag("--allow-self-loops", args.allow_self_loops, "accept self-loops on load");
    cmd->add_flag("--jsonl", args.jsonl, "emit JSON Lines instead of CSV");
    cmd->add_option("--threads", args.threads, "scoring threads (0 = auto)");
    cmd->add_option("--out", args.out_path, "output file")->required();
}

json score_config(const char* cmd, const ScoreArgs& args) {
    json config;
    config["command"] = cmd;
    config["graph"] = args.graph_path;
    config["groups"] = args.groups_path;
    config["model"] = args.model;
    config["exact_threshold"] = args.exact_threshold;
    config["weight_mode"] = args.weight_mode;
    config["allow_self_loops"] = args.allow_self_loops;
    config["out"] = args.out_path;
    return config;
}

int cmd_score(const ScoreArgs& args, bool ranked) {
    Graph graph = load_graph_file(args.graph_path,
                                  load_options(args.weight_mode, args.allow_self_loops));
    std::vector<Group> groups = load_groups_file(args.groups_path, graph);

    std::vector<ScoreRow> rows(groups.size());
    parallel_for(groups.size(), args.threads, [&](std::size_t i) {
        thread_local GroupScratch scratch;
        rows[i] = score_one(graph, groups[i], args.model, args.exact_threshold, scratch);
    });

    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    if (ranked) {
        // Ranking clamps the He bound at 0; negative values all tie at the bottom.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::max(0.0, rows[a].selected_score) > std::max(0.0, rows[b].selected_score);
        });
    }

    auto out = open_output(args.out_path);
    write_config_header(out, ranked ? "rank" : "score", score_config(ranked ? "rank" : "score", args));
    if (!args.jsonl) out << (ranked ? "rank," : "") << kScoreColumns << '\n';
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (ranked && !args.jsonl) out << (k + 1) << ',';
        write_score_row(out, groups[order[k]].id, rows[order[k]], args.jsonl);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(CLI::App* cmd) {
    struct SynthArgs {
        std::string preset, out_prefix;
        std::vector<Count> sizes;
        std::vector<double> probs;
        double noise = 0.0;
        std::uint64_t seed = 0;
    };
    auto args = std::make_shared<SynthArgs>();
    cmd->add_option("--preset", args->preset, "syn1|syn2|syn3");
    cmd->add_option("--sizes", args->sizes, "custom group sizes")->delimiter(',');
    cmd->add_option("--probs", args->probs, "custom internal probabilities")->delimiter(',');
    cmd->add_option("--noise", args->noise, "inter-group edge probability");
    cmd->add_option("--seed", args->seed, "generator seed");
    cmd->add_option("--out", args->out_prefix, "output prefix (.edges and .groups)")->required();
    cmd->callback([args]() {
        const auto& [preset, out_prefix, sizes, probs, noise, seed] = *args;
        SyntheticSpec spec = preset_spec(preset, sizes, probs, noise, seed);
        auto result = generate(spec);
        json config;
        config["command"] = "synth";
        config["preset"] = preset;
        config["sizes"] = spec.group_sizes;
        config["probs"] = spec.internal_probs;
        config["noise"] = spec.noise_prob;
        config["seed"] = spec.seed;
        config["out"] = out_prefix;
        auto edges = open_output(out_prefix + ".edges");
        write_config_header(edges, "synth", config);
        write_graph(edges, result.graph);
        auto groups = open_output(out_prefix + ".groups");
        write_config_header(groups, "synth", config);
        write_groups(groups, result.reference, result.graph);
    });
    return 0;
}

// ---------------------------------------------------------------------------
// detect

int cmd_detect(CLI::App* cmd) {
    auto args = std::make_shared<ScoreArgs>();
    auto objective = std::make_shared<std::string>("edge");
    auto seed = std::make_shared<std::uint64_t>(0);
    auto level = std::make_shared<long long>(-1);
    auto min_size = std::make_shared<Count>(3);
    auto size_range = std::make_shared<std::string>();
    cmd->add_option("--graph", args->graph_path, "edge-list file")->required();
    cmd->add_option("--objective", *objective, "edge|node modularity");
    cmd->add_option("--seed", *seed, "move-order seed");
    cmd->add_option("--level", *level, "Louvain pass to extract (-1 = final)");
    cmd->add_option("--min-size", *min_size, "minimum group size");
    cmd->add_option("--size-range", *size_range, "LO:HI size filter");
    cmd->add_option("--weight-mode", args->weight_mode, "unweighted|integer|round");
    cmd->add_flag("--allow-self-loops", args->allow_self_loops, "accept self-loops on load");
    cmd->add_option("--out", args->out_path, "output group file")->required();
    cmd->callback([=]() {
        Graph graph = load_graph_file(args->graph_path,
                                      load_options(args->weight_mode, args->allow_self_loops));
        Objective obj = *objective == "node" ? Objective::node_modularity
                                             : Objective::edge_modularity;
        if (*objective != "node" && *objective != "edge")
            throw CLI::ValidationError("--objective must be edge|node");
        Partition partition = louvain(graph, obj, *seed);
        std::size_t lvl = *level < 0 ? partition.level_count() - 1
                                     : static_cast<std::size_t>(*level);
        SizeRange range{*min_size, std::numeric_limits<Count>::max()};
        if (!size_range->empty()) {
            auto [lo, hi] = parse_size_range(*size_range);
            range = {lo, hi};
        }
        auto groups = extract_level(partition, lvl, range);
        json config;
        config["command"] = "detect";
        config["graph"] = args->graph_path;
        config["objective"] = *objective;
        config["seed"] = *seed;
        config["level"] = lvl;
        config["levels_total"] = partition.level_count();
        config["min_size"] = range.min_size;
        config["out"] = args->out_path;
        config["modularity"] =
            modularity_total(graph, partition.assignment(lvl), obj);
        auto out = open_output(args->out_path);
        write_config_header(out, "detect", config);
        write_groups(out, groups, graph);
        std::cerr << "detect: " << partition.level_count() << " levels, " << groups.size()
                  << " groups at level " << lvl << "\n";
    });
    return 0;
}

// ---------------------------------------------------------------------------
// eval

const char* kEvalColumns =
    "noise,method,spr_mean,spr_std,topPR_mean,topPR_std,top5PR_mean,avgPR,groups_mean,"
    "noranking_rate";

void write_report_rows(std::ostream& out, const EvalReport& report) {
    for (const auto& m : report.methods) {
        out << fmt(report.noise) << ',' << to_string(m.method) << ','
            << (m.spr_count > 0 ? fmt(m.spr_mean) : "") << ','
            << (m.spr_count > 0 ? fmt(m.spr_std) : "") << ',' << fmt(m.top_pr_mean) << ','
            << fmt(m.top_pr_std) << ',' << fmt(m.top5_pr_mean) << ',' << fmt(report.avg_pr)
            << ',' << fmt(report.groups_mean) << ',' << fmt(m.noranking_rate) << '\n';
    }
}

// Groups loaded without a graph: labels are interned into a shared universe
// so candidate/reference overlap can be computed from files alone.
std::vector<Group> load_label_groups(const std::string& path,
                                     std::unordered_map<std::string, NodeId>& universe) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open group file: " + path);
    std::vector<Group> groups;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::string id;
        std::vector<std::string> labels;
        if (line[pos] == '{') {
            json obj = json::parse(line);
            id = obj.at("id").is_string() ? obj["id"].get<std::string>() : obj["id"].dump();
            for (const auto& node : obj.at("nodes"))
                labels.push_back(node.is_string() ? node.get<std::string>() : node.dump());
        } else {
            auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw ParseError(line_no, "expected JSON object or TSV");
            id = line.substr(0, tab);
            std::istringstream rest(line.substr(tab + 1));
            std::string tok;
            while (rest >> tok) labels.push_back(tok);
        }
        std::vector<NodeId> members;
        for (const auto& label : labels) {
            auto [it, inserted] =
                universe.emplace(label, static_cast<NodeId>(universe.size()));
            members.push_back(it->second);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.empty()) throw ParseError(line_no, "group '" + id + "' is empty");
        groups.push_back(Group{std::move(id), std::move(members)});
    }
    return groups;
}

int cmd_eval(CLI::App* cmd) {
    struct EvalArgs {
        std::string preset, sweep, out_path, refs_path, groups_path, graph_path, scores_path;
        std::vector<Count> sizes;
        std::vector<double> probs;
        std::vector<double> noises;
        std::vector<std::string> methods = {"binomial", "conductance", "modularity", "tpr",
                                            "size"};
        std::string objective = "edge";
        std::string weight_mode = "unweighted";
        std::string size_range;
        long long level = -1;
        int trials = 200;
        std::uint64_t seed = 0;
        Count min_size = 3;
        Count exact_threshold = 50;
        bool zero_sub = false;
        unsigned threads = 0;
    };
    auto args = std::make_shared<EvalArgs>();
    cmd->add_option("--preset", args->preset, "syn1|syn2|syn3 (synthetic mode)");
    cmd->add_option("--sizes", args->sizes, "custom group sizes")->delimiter(',');
    cmd->add_option("--probs", args->probs, "custom internal probabilities")->delimiter(',');
    cmd->add_option("--noise-sweep", args->sweep, "LO:HI:STEP noise sweep");
    cmd->add_option("--noise", args->noises, "explicit noise points")->delimiter(',');
    cmd->add_option("--trials", args->trials, "trials per noise point");
    cmd->add_option("--seed", args->seed, "experiment seed");
    cmd->add_option("--methods", args->methods, "ranking methods")->delimiter(',');
    cmd->add_option("--objective", args->objective, "Louvain objective: edge|node");
    cmd->add_option("--min-size", args->min_size, "minimum group size");
    cmd->add_option("--size-range", args->size_range, "LO:HI size filter");
    cmd->add_option("--level", args->level, "Louvain pass to use (-1 = final)");
    cmd->add_option("--exact-threshold", args->exact_threshold, "exact tail when deg <= N");
    cmd->add_flag("--spr-zero-sub", args->zero_sub, "score no-ranking trials as SPR 0");
    cmd->add_option("--threads", args->threads, "trial threads (0 = auto)");
    cmd->add_option("--refs", args->refs_path, "reference group file (file mode)");
    cmd->add_option("--groups", args->groups_path, "candidate group file (file mode)");
    cmd->add_option("--graph", args->graph_path, "graph for scoring candidates (file mode)");
    cmd->add_option("--scores", args->scores_path, "CSV of per-candidate method scores");
    cmd->add_option("--weight-mode", args->weight_mode, "unweighted|integer|round");
    cmd->add_option("--out", args->out_path, "output CSV")->required();

    cmd->callback([args]() {
        json config;
        config["command"] = "eval";
        config["seed"] = args->seed;
        config["min_size"] = args->min_size;
        config["out"] = args->out_path;

        if (!args->refs_path.empty() && args->groups_path.empty()) {
            // Loaded-data mode: fixed graph and references, randomized
            // Louvain per trial.
            if (args->graph_path.empty())
                throw CLI::ValidationError("file mode needs --groups or --graph");
            Graph graph =
                load_graph_file(args->graph_path, load_options(args->weight_mode, false));
            auto references = load_groups_file(args->refs_path, graph);
            ExperimentConfig ec;
            ec.trials = args->trials;
            ec.seed = args->seed;
            for (const auto& name : args->methods) ec.methods.push_back(parse_method(name));
            ec.objective = args->objective == "node" ? Objective::node_modularity
                                                     : Objective::edge_modularity;
            ec.min_group_size = args->min_size;
            if (!args->size_range.empty()) {
                auto [lo, hi] = parse_size_range(args->size_range);
                ec.min_group_size = lo;
                ec.max_group_size = hi;
            }
            ec.exact_threshold = args->exact_threshold;
            ec.spr_zero_substitution = args->zero_sub;
            ec.threads = args->threads;
            if (args->level >= 0) ec.level = static_cast<std::size_t>(args->level);

            config["refs"] = args->refs_path;
            config["graph"] = args->graph_path;
            config["trials"] = ec.trials;
            config["methods"] = args->methods;
            EvalReport report = run_loaded_experiment(graph, references, ec);
            auto out = open_output(args->out_path);
            write_config_header(out, "eval", config);
            out << kEvalColumns << '\n';
            write_report_rows(out, report);
            return;
        }

        if (!args->refs_path.empty()) {
            // File mode: evaluate provided candidates against provided references.
            config["refs"] = args->refs_path;
            config["groups"] = args->groups_path;
            EvalReport report;
            report.trials = 1;
            std::vector<Group> candidates, references;
            Graph graph;
            bool have_graph = !args->graph_path.empty();
            if (have_graph) {
                graph = load_graph_file(args->graph_path,
                                        load_options(args->weight_mode, false));
                references = load_groups_file(args->refs_path, graph);
                candidates = load_groups_file(args->groups_path, graph);
            } else {
                std::unordered_map<std::string, NodeId> universe;
                references = load_label_groups(args->refs_path, universe);
                candidates = load_label_groups(args->groups_path, universe);
            }
            auto keep = [&](std::vector<Group>& gs) {
                std::erase_if(gs, [&](const Group& g) { return g.size() < args->min_size; });
            };
            keep(references);
            keep(candidates);

            auto overlaps = overlap_scores(candidates, references);
            std::vector<double> overlap_values;
            std::vector<Count> sizes;
            for (const auto& o : overlaps) overlap_values.push_back(o.score);
            for (const auto& c : candidates) sizes.push_back(c.size());
            double avg_pr = 0;
            for (double v : overlap_values) avg_pr += v;
            avg_pr = overlap_values.empty() ? 0 : avg_pr / overlap_values.size();

            const bool reference_tied =
                overlap_values.size() < 2 ||
                std::adjacent_find(overlap_values.begin(), overlap_values.end(),
                                   std::not_equal_to<>()) == overlap_values.end();

            auto out = open_output(args->out_path);
            write_config_header(out, "eval", config);
            out << kEvalColumns << '\n';
            auto emit = [&](const std::string& name, const std::vector<double>& scores,
                            RankDirection dir) {
                auto rank = rank_metrics(overlap_values, scores, dir, &sizes);
                const bool tied = std::adjacent_find(scores.begin(), scores.end(),
                                                     std::not_equal_to<>()) == scores.end();
                std::string spr_cell;
                if (!reference_tied && !tied) {
                    std::vector<double> oriented = scores;
                    if (dir == RankDirection::ascending)
                        for (double& s : oriented) s = -s;
                    spr_cell = fmt(*spearman(overlap_values, oriented));
                }
                out << "0," << name << ',' << spr_cell << ",0," << fmt(rank.top_pr) << ",0,"
                    << fmt(rank.top5_pr) << ',' << fmt(avg_pr) << ','
                    << candidates.size() << ',' << (tied ? 1 : 0) << '\n';
            };

            if (!args->scores_path.empty()) {
                std::ifstream sf(args->scores_path);
                if (!sf) throw std::runtime_error("cannot open scores file: " + args->scores_path);
                std::string header;
                std::getline(sf, header);
                std::vector<std::string> columns;
                std::istringstream hs(header);
                std::string col;
                while (std::getline(hs, col, ',')) columns.push_back(col);
                if (columns.empty() || columns[0] != "id")
                    throw std::runtime_error("scores CSV must start with an 'id' column");
                std::unordered_map<std::string, std::vector<double>> by_id;
                std::string line;
                while (std::getline(sf, line)) {
                    if (line.empty() || line[0] == '#') continue;
                    std::istringstream ls(line);
                    std::string id_cell, cell;
                    std::getline(ls, id_cell, ',');
                    std::vector<double> values;
                    while (std::getline(ls, cell, ',')) values.push_back(std::stod(cell));
                    if (values.size() + 1 != columns.size())
                        throw std::runtime_error("scores CSV row width mismatch");
                    by_id[id_cell] = std::move(values);
                }
                for (std::size_t ci = 1; ci < columns.size(); ++ci) {
                    std::vector<double> scores;
                    for (const auto& c : candidates) {
                        auto it = by_id.find(c.id);
                        if (it == by_id.end())
                            throw std::runtime_error("scores CSV missing candidate: " + c.id);
                        scores.push_back(it->second[ci - 1]);
                    }
                    std::string name = columns[ci];
                    RankDirection dir = RankDirection::descending;
                    if (name.size() > 4 && name.substr(name.size() - 4) == ":asc") {
                        dir = RankDirection::ascending;
                        name = name.substr(0, name.size() - 4);
                    }
                    emit(name, scores, dir);
                }
            } else {
                if (!have_graph)
                    throw CLI::ValidationError("file mode needs --graph or --scores");
                for (const auto& name : args->methods) {
                    Method method = parse_method(name);
                    auto scores =
                        score_groups(graph, candidates, method, args->exact_threshold);
                    emit(name, scores, direction_of(method));
                }
            }
            return;
        }

        // Synthetic mode.
        ExperimentConfig ec;
        ec.base = preset_spec(args->preset, args->sizes, args->probs, 0.0, 0);
        if (!args->sweep.empty())
            ec.noises = parse_sweep(args->sweep);
        else if (!args->noises.empty())
            ec.noises = args->noises;
        else
            ec.noises = default_noise_sweep();
        ec.trials = args->trials;
        ec.seed = args->seed;
        for (const auto& name : args->methods) ec.methods.push_back(parse_method(name));
        ec.objective = args->objective == "node" ? Objective::node_modularity
                                                 : Objective::edge_modularity;
        ec.min_group_size = args->min_size;
        if (!args->size_range.empty()) {
            auto [lo, hi] = parse_size_range(args->size_range);
            ec.min_group_size = lo;
            ec.max_group_size = hi;
        }
        ec.exact_threshold = args->exact_threshold;
        ec.spr_zero_substitution = args->zero_sub;
        ec.threads = args->threads;
        if (args->level >= 0) ec.level = static_cast<std::size_t>(args->level);

        config["preset"] = args->preset;
        config["noises"] = ec.noises;
        config["trials"] = ec.trials;
        config["methods"] = args->methods;
        config["objective"] = args->objective;
        config["spr_zero_sub"] = ec.spr_zero_substitution;
        config["exact_threshold"] = ec.exact_threshold;

        auto reports = run_experiment(ec);
        auto out = open_output(args->out_path);
        write_config_header(out, "eval", config);
        out << kEvalColumns << '\n';
        for (const auto& report : reports) write_report_rows(out, report);
    });
    return 0;
}

// ---------------------------------------------------------------------------
// membership

int cmd_membership(CLI::App* cmd) {
    auto args = std::make_shared<ScoreArgs>();
    auto aggregator = std::make_shared<std::string>("median");
    auto alpha = std::make_shared<double>(0.5);
    auto group_out = std::make_shared<std::string>();
    cmd->add_option("--graph", args->graph_path, "edge-list file")->required();
    cmd->add_option("--groups", args->groups_path, "group file")->required();
    cmd->add_option("--aggregator", *aggregator, "median|mean|quantile");
    cmd->add_option("--alpha", *alpha, "quantile level");
    cmd->add_option("--exact-threshold", args->exact_threshold, "exact tail when deg <= N");
    cmd->add_option("--weight-mode", args->weight_mode, "unweighted|integer|round");
    cmd->add_option("--out", args->out_path, "per-node scores CSV")->required();
    cmd->add_option("--group-out", *group_out, "aggregated per-group CSV");
    cmd->callback([=]() {
        Graph graph = load_graph_file(args->graph_path, load_options(args->weight_mode, false));
        auto groups = load_groups_file(args->groups_path, graph);
        Aggregator agg;
        if (*aggregator == "median")
            agg = Aggregator::median;
        else if (*aggregator == "mean")
            agg = Aggregator::mean;
        else if (*aggregator == "quantile")
            agg = Aggregator::quantile;
        else
            throw CLI::ValidationError("--aggregator must be median|mean|quantile");

        json config;
        config["command"] = "membership";
        config["graph"] = args->graph_path;
        config["groups"] = args->groups_path;
        config["aggregator"] = *aggregator;
        config["alpha"] = *alpha;
        config["exact_threshold"] = args->exact_threshold;
        config["out"] = args->out_path;

        MembershipOptions options{args->exact_threshold, true};
        auto out = open_output(args->out_path);
        write_config_header(out, "membership", config);
        out << "group,node,deg_node,din_node,p,score\n";
        std::vector<double> group_scores;
        for (const auto& g : groups) {
            auto scores = membership_scores(graph, g, options);
            for (const auto& s : scores)
                out << g.id << ',' << graph.label(s.node) << ',' << s.deg_node << ','
                    << s.din_node << ',' << fmt(s.p) << ',' << fmt(s.score) << '\n';
            group_scores.push_back(
                group_membership_score(graph, g, agg, *alpha, options));
        }
        if (!group_out->empty()) {
            auto gout = open_output(*group_out);
            write_config_header(gout, "membership", config);
            gout << "group,aggregator,score\n";
            for (std::size_t i = 0; i < groups.size(); ++i)
                gout << groups[i].id << ',' << *aggregator << ',' << fmt(group_scores[i])
                     << '\n';
        }
    });
    return 0;
}

// ---------------------------------------------------------------------------
// edges

int cmd_edges(CLI::App* cmd) {
    auto args = std::make_shared<ScoreArgs>();
    auto trials_mode = std::make_shared<std::string>("outgoing");
    cmd->add_option("--graph", args->graph_path, "edge-list file")->required();
    cmd->add_option("--groups", args->groups_path, "partition group file")->required();
    cmd->add_option("--trials-mode", *trials_mode, "outgoing|total");
    cmd->add_option("--exact-threshold", args->exact_threshold, "exact tail when deg <= N");
    cmd->add_option("--weight-mode", args->weight_mode, "unweighted|integer|round");
    cmd->add_option("--out", args->out_path, "group-graph JSONL")->required();
    cmd->callback([=]() {
        Graph graph = load_graph_file(args->graph_path, load_options(args->weight_mode, false));
        auto groups = load_groups_file(args->groups_path, graph);
        TrialsMode mode;
        if (*trials_mode == "outgoing")
            mode = TrialsMode::outgoing;
        else if (*trials_mode == "total")
            mode = TrialsMode::total;
        else
            throw CLI::ValidationError("--trials-mode must be outgoing|total");
        GroupGraph gg = build_group_graph(graph, groups);

        json config;
        config["command"] = "edges";
        config["graph"] = args->graph_path;
        config["groups"] = args->groups_path;
        config["trials_mode"] = *trials_mode;
        config["exact_threshold"] = args->exact_threshold;
        config["out"] = args->out_path;

        auto out = open_output(args->out_path);
        write_config_header(out, "edges", config);
        for (const auto& [key, weight] : gg.weights) {
            auto st = edge_significance(gg, key.first, key.second, mode,
                                        {args->exact_threshold});
            auto ts = edge_significance(gg, key.second, key.first, mode,
                                        {args->exact_threshold});
            nlohmann::ordered_json obj;
            obj["source"] = gg.groups[static_cast<std::size_t>(key.first)].id;
            obj["target"] = gg.groups[static_cast<std::size_t>(key.second)].id;
            obj["weight"] = weight;
            obj["score_st"] = st.score;
            obj["score_ts"] = ts.score;
            obj["score_max"] = std::max(st.score, ts.score);
            out << obj.dump() << '\n';
        }
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binomial-tail significance scoring and ranking of graph communities"};
    app.require_subcommand(1);

    cmd_synth(app.add_subcommand("synth", "generate a planted-partition benchmark"));

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "score groups with the binomial family");
    add_score_flags(score, score_args);
    ScoreArgs rank_args;
    auto* rank = app.add_subcommand("rank", "score and sort groups by a model");
    add_score_flags(rank, rank_args);

    cmd_detect(app.add_subcommand("detect", "Louvain community detection"));
    cmd_eval(app.add_subcommand("eval", "evaluate ranking methods against references"));
    cmd_membership(app.add_subcommand("membership", "per-node membership significance"));
    cmd_edges(app.add_subcommand("edges", "inter-group edge significance"));

    try {
        app.parse(argc, argv);
        if (score->parsed()) return cmd_score(score_args, false);
        if (rank->parsed()) return cmd_score(rank_args, true);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
