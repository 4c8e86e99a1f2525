#include "cli.hpp"

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evg/centrality.hpp"
#include "evg/decomposition.hpp"
#include "evg/error.hpp"
#include "evg/event_graph.hpp"
#include "evg/flattened_model.hpp"
#include "evg/format.hpp"
#include "evg/generators.hpp"
#include "evg/io.hpp"
#include "evg/motifs.hpp"
#include "evg/parallel.hpp"
#include "evg/percolation.hpp"

namespace evg::cli {

namespace {

using json = nlohmann::ordered_json;

struct InputOptions {
    std::string path;
    std::string format = "auto";
    bool undirected = false;
    std::string overlap = "warn";
};

struct Common {
    std::string output;
    std::string save_config;
    unsigned threads = 0;
};

// Shared state for one invocation.
struct Context {
    std::ostream& out;
    std::ostream& err;
    std::string current_file;
    json summary = json::object();
};

double number(const std::string& text, const std::string& flag) {
    try {
        return parse_number(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(flag + ": expected a number, got '" + text + "'");
    }
}

std::vector<double> numbers(const std::vector<std::string>& texts, const std::string& flag) {
    std::vector<double> values;
    values.reserve(texts.size());
    for (const auto& t : texts) values.push_back(number(t, flag));
    return values;
}

void add_input(CLI::App* sub, InputOptions& in) {
    sub->add_option("input", in.path, "Event file, CSV or JSON-lines")->required()->configurable();
    sub->add_option("--format", in.format, "Input format; auto picks by extension")
        ->check(CLI::IsMember({"auto", "csv", "jsonl"}))
        ->capture_default_str();
    sub->add_flag("--undirected", in.undirected, "Treat events as undirected");
    sub->add_option("--overlap", in.overlap, "Handling of overlapping events at one node")
        ->check(CLI::IsMember({"error", "warn", "ignore"}))
        ->capture_default_str();
}

void add_common(CLI::App* sub, Common& common, bool threads) {
    sub->add_option("--save-config", common.save_config, "Write the effective options to a key=value file")
        ->configurable(false);
    sub->add_option("-o,--output", common.output, "Output file (default: stdout)");
    if (threads) sub->add_option("--threads", common.threads, "Worker threads (0: EVG_THREADS or all cores)");
}

EventSequence load(Context& ctx, const InputOptions& in) {
    ctx.current_file = in.path;
    std::optional<InputFormat> format;
    if (in.format == "csv") format = InputFormat::csv;
    if (in.format == "jsonl") format = InputFormat::jsonl;
    const OverlapPolicy policy = in.overlap == "error"  ? OverlapPolicy::error
                                 : in.overlap == "ignore" ? OverlapPolicy::ignore
                                                          : OverlapPolicy::warn;
    auto seq = read_events(in.path, !in.undirected, policy, format);
    ctx.current_file.clear();
    ctx.summary["events"] = seq.size();
    ctx.summary["nodes"] = seq.node_count();
    return seq;
}

void emit(Context& ctx, const Common& common, const std::string& text) {
    if (common.output.empty() || common.output == "-") {
        ctx.out << text;
    } else {
        write_file_atomic(common.output, text);
        ctx.summary["output"] = common.output;
    }
}

void save_config(const CLI::App* sub, const Common& common) {
    if (common.save_config.empty()) return;
    write_file_atomic(common.save_config, sub->config_to_str(true, false));
}

std::string components_csv(const std::vector<Component>& components) {
    std::ostringstream s;
    s << "n_events,n_nodes,duration\n";
    for (const auto& c : components) s << c.n_events << ',' << c.n_nodes << ',' << format_number(c.duration) << '\n';
    return s.str();
}

// Flat key=value config whose keys belong to the selected subcommand.
class SubcommandConfig : public CLI::ConfigINI {
public:
    explicit SubcommandConfig(const CLI::App& app) : app_(&app) {}

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigINI::from_config(input);
        const auto subs = app_->get_subcommands();
        if (subs.empty()) return items;
        const CLI::App* sub = subs.front();
        for (auto& item : items) {
            item.parents.insert(item.parents.begin(), sub->get_name());
            // An unquoted value with spaces, such as a rule, is one value.
            const CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
            if (opt == nullptr) opt = sub->get_option_no_throw(item.name);
            if (opt != nullptr && opt->get_items_expected_max() == 1 && item.inputs.size() > 1)
                item.inputs = {CLI::detail::join(item.inputs, " ")};
        }
        return items;
    }

private:
    const CLI::App* app_;
};

CentralityVariant variant_of(const std::string& name) {
    if (name == "unweighted") return CentralityVariant::unweighted;
    if (name == "decayed") return CentralityVariant::decayed;
    return CentralityVariant::decayed_with_dT;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Event-graph analysis of temporal networks", "evg"};
    app.set_version_flag("--version", "evg 0.1.0");
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<SubcommandConfig>(app));
    app.set_config("--config", "", "Read subcommand options from a key=value file; flags override it");
    Context ctx{out, err, {}, json::object()};

    // build
    InputOptions build_in;
    Common build_common;
    std::string build_rule;
    std::string build_export = "edges";
    auto* build = app.add_subcommand("build", "Build an event graph and export it");
    add_input(build, build_in);
    add_common(build, build_common, false);
    build->add_option("--rule", build_rule, "Joining rule, e.g. 'adjacency dt=20 subsequent=node'")->required();
    build->add_option("--export", build_export, "Export format")
        ->check(CLI::IsMember({"edges", "dot"}))
        ->capture_default_str();

    // components
    InputOptions comp_in;
    Common comp_common;
    std::string comp_rule = "adjacency dt=inf";
    auto* components = app.add_subcommand("components", "Weakly connected components and their sizes");
    add_input(components, comp_in);
    add_common(components, comp_common, false);
    components->add_option("--rule", comp_rule, "Joining rule")->capture_default_str();

    // scan
    InputOptions scan_in;
    Common scan_common;
    std::string scan_rule = "adjacency dt=inf subsequent=node";
    std::vector<std::string> scan_grid;
    std::size_t scan_max_points = 0;
    std::string scan_chi = "ratio";
    auto* scan_cmd = app.add_subcommand("scan", "Largest-component fractions and susceptibility against dt");
    add_input(scan_cmd, scan_in);
    add_common(scan_cmd, scan_common, false);
    scan_cmd->add_option("--rule", scan_rule, "Joining rule with an upper bound of at least the grid")
        ->capture_default_str();
    scan_cmd->add_option("--grid", scan_grid, "Comma-separated dt values (default: every edge weight)")
        ->delimiter(',');
    scan_cmd->add_option("--max-points", scan_max_points, "Keep at most this many evenly spaced points (0: all)");
    scan_cmd->add_option("--chi", scan_chi, "Susceptibility normalisation")
        ->check(CLI::IsMember({"ratio", "sum_squares"}))
        ->capture_default_str();

    // motifs
    InputOptions motif_in;
    Common motif_common;
    std::string motif_kind;
    std::string motif_dt;
    std::string motif_delta;
    std::size_t motif_l = 3;
    std::optional<std::size_t> motif_k;
    std::size_t motif_max = 4;
    std::string census_name = "none";
    auto* motifs = app.add_subcommand("motifs", "Enumerate temporal motifs");
    add_input(motifs, motif_in);
    add_common(motifs, motif_common, true);
    motifs->add_option("--kind", motif_kind, "Motif family")
        ->check(CLI::IsMember({"sequential", "windowed"}))
        ->required();
    motifs->add_option("--dt", motif_dt, "Largest inter-event time (sequential)");
    motifs->add_option("--delta", motif_delta, "Largest time span (windowed)");
    motifs->add_option("-l,--events", motif_l, "Events per motif")->capture_default_str();
    motifs->add_option("-k,--nodes", motif_k, "Required node count (windowed)");
    motifs->add_option("--max-events", motif_max, "Upper limit accepted for -l")->capture_default_str();
    motifs->add_option("--census", census_name, "Count instances instead of listing them")
        ->check(CLI::IsMember({"none", "signature", "node", "node_role"}))
        ->capture_default_str();

    // centrality
    InputOptions cent_in;
    Common cent_common;
    std::string cent_rule = "walk dt=inf";
    std::vector<std::string> cent_alpha{"0.5"};
    std::vector<std::string> cent_beta{"0"};
    std::string cent_variant = "unweighted";
    std::string cent_horizon;
    std::string cent_table = "node";
    auto* centrality = app.add_subcommand("centrality", "Broadcast communicability of events and nodes");
    add_input(centrality, cent_in);
    add_common(centrality, cent_common, true);
    centrality->add_option("--rule", cent_rule, "Joining rule")->capture_default_str();
    centrality->add_option("--alpha", cent_alpha, "Walk weight, comma-separated for a sweep")
        ->delimiter(',')
        ->capture_default_str();
    centrality->add_option("--beta", cent_beta, "Decay rate, comma-separated for a sweep")
        ->delimiter(',')
        ->capture_default_str();
    centrality->add_option("--variant", cent_variant, "Walk weighting")
        ->check(CLI::IsMember({"unweighted", "decayed", "decayed_dT"}))
        ->capture_default_str();
    centrality->add_option("--horizon", cent_horizon, "Horizon T for decayed_dT (default: last event time)");
    centrality->add_option("--table", cent_table, "Table to write")
        ->check(CLI::IsMember({"event", "node", "sweep"}))
        ->capture_default_str();

    // decompose
    InputOptions dec_in;
    Common dec_common;
    std::string dec_rule = "adjacency dt=inf subsequent=node";
    std::vector<std::string> dec_widths;
    unsigned dec_levels = 10;
    auto* decompose = app.add_subcommand("decompose", "Share of event-graph edges cut by fixed-width intervals");
    add_input(decompose, dec_in);
    add_common(decompose, dec_common, true);
    decompose->add_option("--rule", dec_rule, "Joining rule")->capture_default_str();
    decompose->add_option("--widths", dec_widths, "Comma-separated widths as fractions of the duration")
        ->delimiter(',');
    decompose->add_option("--levels", dec_levels, "Without --widths, use 1, 1/2, ..., 1/2^levels")
        ->capture_default_str();

    // generate
    Common gen_common;
    std::string gen_model;
    std::size_t gen_n = 0;
    std::size_t gen_m = 0;
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "Synthetic event sequences");
    add_common(generate, gen_common, false);
    generate->add_option("model", gen_model, "Generator")
        ->check(CLI::IsMember({"random-complete", "ustar"}))
        ->required();
    generate->add_option("-n,--nodes", gen_n, "Node count")->required();
    generate->add_option("-m,--events", gen_m, "Event count")->required();
    generate->add_option("--seed", gen_seed, "Random seed")->required();

    // fit
    InputOptions fit_in;
    Common fit_common;
    std::string fit_dt = "inf";
    auto* fit = app.add_subcommand("fit", "Fit a flattened second-order model");
    add_input(fit, fit_in);
    add_common(fit, fit_common, false);
    fit->add_option("--dt", fit_dt, "Adjacency bound of the event-subsequent graph")->capture_default_str();

    // sample
    Common sample_common;
    std::string sample_model;
    std::vector<std::string> sample_start;
    std::size_t sample_length = 0;
    std::uint64_t sample_seed = 0;
    std::string sample_mode = "probability";
    auto* sample_cmd = app.add_subcommand("sample", "Sample an event sequence from a flattened model");
    add_common(sample_cmd, sample_common, false);
    sample_cmd->add_option("model", sample_model, "Model JSON written by fit")->required();
    sample_cmd->add_option("--start", sample_start, "Initial edge type as source,target")
        ->delimiter(',')
        ->required();
    sample_cmd->add_option("--length", sample_length, "Number of events")->required();
    sample_cmd->add_option("--seed", sample_seed, "Random seed")->required();
    sample_cmd->add_option("--mode", sample_mode, "Next-event choice")
        ->check(CLI::IsMember({"probability", "waiting_time"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    CLI::App* active = app.get_subcommands().front();
    ctx.summary["status"] = "ok";
    ctx.summary["command"] = active->get_name();

    try {
        if (active == build) {
            save_config(build, build_common);
            const auto rule = JoiningRule::parse(build_rule);
            const auto g = evg::build(load(ctx, build_in), rule);
            std::ostringstream s;
            export_graph(s, g, build_export == "dot" ? ExportFormat::dot : ExportFormat::edge_list);
            ctx.summary["edges"] = g.edge_count();
            emit(ctx, build_common, s.str());
        } else if (active == components) {
            save_config(components, comp_common);
            const auto rule = JoiningRule::parse(comp_rule);
            const auto g = evg::build(load(ctx, comp_in), rule);
            const auto comps = weak_components(g);
            ctx.summary["edges"] = g.edge_count();
            ctx.summary["components"] = comps.size();
            emit(ctx, comp_common, components_csv(comps));
        } else if (active == scan_cmd) {
            save_config(scan_cmd, scan_common);
            const auto rule = JoiningRule::parse(scan_rule);
            ScanOptions options;
            options.grid = numbers(scan_grid, "--grid");
            if (!scan_grid.empty() && options.grid.empty()) throw std::invalid_argument("--grid: empty grid");
            options.max_points = scan_max_points;
            options.chi_mode = scan_chi == "sum_squares" ? ChiMode::sum_squares : ChiMode::ratio;
            const auto g = evg::build(load(ctx, scan_in), rule);
            const auto profile = evg::scan(g, options);
            std::ostringstream s;
            write_profile_csv(s, profile);
            ctx.summary["edges"] = g.edge_count();
            ctx.summary["points"] = profile.points.size();
            ctx.summary["dt90"] = profile.dt90;
            double peak_dt = 0.0;
            double peak = -1.0;
            for (const auto& p : profile.points)
                if (p.chi > peak) {
                    peak = p.chi;
                    peak_dt = p.dt;
                }
            ctx.summary["chi_peak_dt"] = peak_dt;
            emit(ctx, scan_common, s.str());
        } else if (active == motifs) {
            save_config(motifs, motif_common);
            MotifOptions options{motif_max, motif_common.threads};
            const bool sequential = motif_kind == "sequential";
            const std::string& bound_text = sequential ? motif_dt : motif_delta;
            if (bound_text.empty())
                throw std::invalid_argument(sequential ? "--dt is required for sequential motifs"
                                                       : "--delta is required for windowed motifs");
            const double bound = number(bound_text, sequential ? "--dt" : "--delta");
            if (sequential && motif_k) throw std::invalid_argument("-k applies to windowed motifs only");
            const auto rule = sequential ? JoiningRule::adjacency(bound, Subsequent::per_node)
                                         : JoiningRule::adjacency(bound);
            const auto seq = std::make_shared<const EventSequence>(load(ctx, motif_in));
            const auto g = evg::build(seq, rule);
            const auto instances = sequential ? enumerate_sequential(g, bound, motif_l, options)
                                              : enumerate_windowed(g, bound, motif_l, motif_k, options);
            std::ostringstream s;
            if (census_name == "none") {
                write_instances_jsonl(s, instances);
            } else {
                const CensusKey key = census_name == "signature" ? CensusKey::signature
                                      : census_name == "node"    ? CensusKey::node
                                                                  : CensusKey::node_role;
                write_census_csv(s, motif_census(*seq, instances, key));
            }
            ctx.summary["instances"] = instances.size();
            emit(ctx, motif_common, s.str());
        } else if (active == centrality) {
            save_config(centrality, cent_common);
            const auto rule = JoiningRule::parse(cent_rule);
            const auto alphas = numbers(cent_alpha, "--alpha");
            const auto betas = numbers(cent_beta, "--beta");
            std::optional<double> horizon;
            if (!cent_horizon.empty()) horizon = number(cent_horizon, "--horizon");
            for (double a : alphas)
                for (double b : betas) DecayParams{a, b, horizon}.validate();
            if (cent_table != "sweep" && alphas.size() * betas.size() != 1)
                throw std::invalid_argument("several --alpha/--beta values need --table sweep");
            const auto variant = variant_of(cent_variant);
            const auto g = evg::build(load(ctx, cent_in), rule);
            const auto& seq = g.sequence();
            std::ostringstream s;
            if (cent_table == "sweep") {
                const auto rows = parameter_sweep(g, alphas, betas, variant, horizon, cent_common.threads);
                write_sweep_table(s, seq, rows);
            } else {
                const auto result = node_projections(g, DecayParams{alphas[0], betas[0], horizon}, variant);
                if (cent_table == "event")
                    write_event_table(s, seq, result.event_broadcast);
                else
                    write_node_table(s, seq, result.node_broadcast);
            }
            ctx.summary["edges"] = g.edge_count();
            emit(ctx, cent_common, s.str());
        } else if (active == decompose) {
            save_config(decompose, dec_common);
            const auto rule = JoiningRule::parse(dec_rule);
            auto widths = numbers(dec_widths, "--widths");
            if (widths.empty()) widths = halving_widths(dec_levels);
            for (double w : widths)
                if (!(w > 0.0 && w <= 1.0))
                    throw std::invalid_argument("--widths: " + format_number(w) + " is outside (0, 1]");
            const auto g = evg::build(load(ctx, dec_in), rule);
            const auto profile = interval_cut(g, widths, dec_common.threads);
            std::ostringstream s;
            write_cut_profile_csv(s, profile);
            ctx.summary["edges"] = g.edge_count();
            emit(ctx, dec_common, s.str());
        } else if (active == generate) {
            save_config(generate, gen_common);
            const auto seq = gen_model == "ustar" ? gen_ustar(gen_n, gen_m, gen_seed)
                                                  : gen_random_complete(gen_n, gen_m, gen_seed);
            std::ostringstream s;
            write_events_csv(s, seq);
            ctx.summary["events"] = seq.size();
            ctx.summary["nodes"] = seq.node_count();
            emit(ctx, gen_common, s.str());
        } else if (active == fit) {
            save_config(fit, fit_common);
            const auto rule = JoiningRule::adjacency(number(fit_dt, "--dt"), Subsequent::per_event);
            const auto g = evg::build(load(ctx, fit_in), rule);
            const auto model = fit_flattened(g);
            std::size_t transitions = 0;
            for (const auto& [from, row] : model.transitions) transitions += row.size();
            ctx.summary["states"] = model.states.size();
            ctx.summary["transitions"] = transitions;
            emit(ctx, fit_common, to_json(model));
        } else if (active == sample_cmd) {
            save_config(sample_cmd, sample_common);
            if (sample_start.size() != 2) throw std::invalid_argument("--start expects source,target");
            ctx.current_file = sample_model;
            std::ifstream in(sample_model);
            if (!in) throw Error("cannot open '" + sample_model + "'");
            const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
            const auto model = model_from_json(text);
            ctx.current_file.clear();
            const auto mode = sample_mode == "waiting_time" ? SampleMode::waiting_time : SampleMode::probability;
            const auto result =
                sample(model, EdgeType{sample_start[0], sample_start[1]}, sample_length, sample_seed, mode);
            std::ostringstream s;
            write_events_csv(s, result.sequence);
            ctx.summary["events"] = result.sequence.size();
            ctx.summary["truncated"] = result.truncated;
            emit(ctx, sample_common, s.str());
        }
    } catch (const std::invalid_argument& e) {
        err << "evg: error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "evg: error: " << (ctx.current_file.empty() ? "" : ctx.current_file + ": ") << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "evg: error: " << e.what() << '\n';
        return kDataError;
    }

    err << ctx.summary.dump() << '\n';
    return kOk;
}

} // namespace evg::cli
