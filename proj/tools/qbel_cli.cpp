// Command-line front end: reads a JSON problem document and runs
// validation, hyper-power-set enumeration, belief/plausibility queries, or
// two-source fusion with the conjunctive or PCR5 rule.
//
// Exit codes: 0 success, 1 unreadable file, 2 invalid document (syntax or
// validation diagnostics), 3 operation error (degenerate redistribution,
// frame too large to enumerate, missing source, ...).

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbel/qbel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnreadable = 1;
constexpr int kExitInvalidDocument = 2;
constexpr int kExitOperationError = 3;

struct CliError : std::runtime_error {
    CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

qbel::ProblemDocument load(const std::string& path) {
    try {
        return qbel::load_document(path);
    } catch (const std::ios_base::failure& e) {
        throw CliError(kExitUnreadable, e.what());
    } catch (const qbel::Error& e) {
        throw CliError(kExitInvalidDocument, e.what());
    }
}

void require_valid(const std::string& name, const qbel::QBBA& qbba) {
    std::vector<qbel::Diagnostic> diagnostics = qbel::validate(qbba);
    if (diagnostics.empty()) return;
    std::string message = "source '" + name + "' is invalid:";
    for (const qbel::Diagnostic& d : diagnostics)
        message += "\n  [" + d.code + "] " + d.message;
    throw CliError(kExitInvalidDocument, message);
}

qbel::ApproxMode parse_mode(const std::string& text) {
    if (text == "stepwise") return qbel::ApproxMode::Stepwise;
    if (text == "deferred") return qbel::ApproxMode::Deferred;
    throw CliError(kExitInvalidDocument, "unknown approximation mode '" + text + "'");
}

qbel::CombinerChoice parse_combiner(const std::string& text) {
    if (text == "min") return qbel::CombinerChoice::Min;
    if (text == "average") return qbel::CombinerChoice::Average;
    if (text == "interval") return qbel::CombinerChoice::Interval;
    throw CliError(kExitInvalidDocument, "unknown confidence combiner '" + text + "'");
}

struct FuseArgs {
    std::string file;
    std::string rule = "conjunctive";
    std::string approx = "stepwise";
    std::string confidence = "min";
    std::string format = "table";
    std::string sources;
    bool trace = false;
    bool unicode = false;
};

int run_fuse(const FuseArgs& args) {
    qbel::ProblemDocument doc = load(args.file);
    if (doc.sources.size() < 2)
        throw CliError(kExitInvalidDocument, "fusion needs at least two sources");

    std::string first = doc.sources[0].first;
    std::string second = doc.sources[1].first;
    if (!args.sources.empty()) {
        auto comma = args.sources.find(',');
        if (comma == std::string::npos)
            throw CliError(kExitInvalidDocument, "--sources expects 'name1,name2'");
        first = args.sources.substr(0, comma);
        second = args.sources.substr(comma + 1);
    }
    const qbel::QBBA* q1 = doc.find_source(first);
    const qbel::QBBA* q2 = doc.find_source(second);
    if (!q1 || !q2)
        throw CliError(kExitOperationError,
                       "no source named '" + (q1 ? second : first) + "' in the document");
    require_valid(first, *q1);
    require_valid(second, *q2);

    qbel::FusionConfig cfg;
    cfg.rule = args.rule == "pcr5" ? qbel::FusionRule::PCR5
               : args.rule == "conjunctive"
                   ? qbel::FusionRule::Conjunctive
                   : throw CliError(kExitInvalidDocument, "unknown rule '" + args.rule + "'");
    cfg.mode = parse_mode(args.approx);
    cfg.combiner = parse_combiner(args.confidence);

    qbel::FusionResult result = qbel::fuse(*q1, *q2, cfg);

    if (args.format == "json") {
        std::cout << qbel::render_json(result, args.trace).dump(2) << "\n";
    } else if (args.format == "table") {
        std::vector<std::pair<std::string, qbel::QBBA>> inputs{{first, *q1}, {second, *q2}};
        std::cout << qbel::render_table(result, inputs, args.unicode);
        if (args.trace) {
            std::cout << "\nderivation:\n";
            for (const std::string& line : result.trace) std::cout << "  " << line << "\n";
        }
    } else {
        throw CliError(kExitInvalidDocument, "unknown format '" + args.format + "'");
    }
    return kExitOk;
}

int run_validate(const std::string& file) {
    qbel::ProblemDocument doc = load(file);
    bool ok = true;
    for (const auto& [name, qbba] : doc.sources) {
        std::vector<qbel::Diagnostic> diagnostics = qbel::validate(qbba);
        if (diagnostics.empty()) {
            std::cout << name << ": ok"
                      << (qbel::is_quasi_normalized(qbba) ? " (quasi-normalized)" : "")
                      << "\n";
        } else {
            ok = false;
            std::cout << name << ":\n";
            for (const qbel::Diagnostic& d : diagnostics)
                std::cout << "  [" << d.code << "] " << d.message << "\n";
        }
    }
    return ok ? kExitOk : kExitInvalidDocument;
}

int run_enumerate(const std::string& file, bool unicode) {
    qbel::ProblemDocument doc = load(file);
    std::vector<qbel::Proposition> elements;
    try {
        elements = qbel::enumerate_hyper_power_set(doc.frame, doc.model);
    } catch (const qbel::FrameTooLargeError& e) {
        throw CliError(kExitOperationError, e.what());
    }
    std::cout << elements.size() << " elements\n";
    for (const qbel::Proposition& p : elements)
        std::cout << qbel::to_string(p, unicode) << "\n";
    return kExitOk;
}

int run_belpl(const std::string& file, const std::string& source, const std::string& prop,
              const std::string& approx, const std::string& confidence) {
    qbel::ProblemDocument doc = load(file);
    const qbel::QBBA* q = doc.find_source(source);
    if (!q)
        throw CliError(kExitOperationError, "no source named '" + source + "' in the document");
    require_valid(source, *q);

    qbel::Proposition p = [&] {
        try {
            return qbel::parse_proposition(prop, doc.frame);
        } catch (const qbel::Error& e) {
            throw CliError(kExitInvalidDocument, e.what());
        }
    }();
    qbel::ApproxMode mode = parse_mode(approx);
    qbel::CombinerChoice how = parse_combiner(confidence);

    qbel::EnrichedLabel belief = qbel::qbelief(*q, p, how, mode);
    qbel::EnrichedLabel plausibility = qbel::qplausibility(*q, p, how, mode);
    auto show = [&](const char* name, const qbel::EnrichedLabel& value) {
        std::cout << name << "(" << p << ") = " << qbel::render_mass(value, doc.enrichment);
        if (!value.label.approximated())
            std::cout << " ~ "
                      << qbel::render_mass(
                             qbel::EnrichedLabel{
                                 approximate(value.label, qbel::IndexClamp::NonNegative),
                                 value.confidence},
                             doc.enrichment);
        std::cout << "\n";
    };
    show("qBel", belief);
    show("qPl", plausibility);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qualitative belief fusion over linguistic labels"};
    app.require_subcommand(1);

    FuseArgs fuse_args;
    CLI::App* fuse = app.add_subcommand("fuse", "Fuse two sources of a problem document");
    fuse->add_option("file", fuse_args.file, "problem document (JSON)")->required();
    fuse->add_option("--rule", fuse_args.rule, "conjunctive|pcr5");
    fuse->add_option("--approx", fuse_args.approx, "stepwise|deferred");
    fuse->add_option("--confidence", fuse_args.confidence, "min|average|interval");
    fuse->add_option("--format", fuse_args.format, "table|json");
    fuse->add_option("--sources", fuse_args.sources, "pair of source names, e.g. qm1,qm2");
    fuse->add_flag("--trace", fuse_args.trace, "append the derivation steps");
    fuse->add_flag("--unicode", fuse_args.unicode, "render with set symbols");

    std::string validate_file;
    CLI::App* validate = app.add_subcommand("validate", "Check every source of a document");
    validate->add_option("file", validate_file, "problem document (JSON)")->required();

    std::string enumerate_file;
    bool enumerate_unicode = false;
    CLI::App* enumerate =
        app.add_subcommand("enumerate", "List the hyper-power set of the document's frame");
    enumerate->add_option("file", enumerate_file, "problem document (JSON)")->required();
    enumerate->add_flag("--unicode", enumerate_unicode, "render with set symbols");

    std::string belpl_file, belpl_source, belpl_prop;
    std::string belpl_approx = "deferred", belpl_confidence = "min";
    CLI::App* belpl =
        app.add_subcommand("belpl", "Belief and plausibility of a proposition");
    belpl->add_option("file", belpl_file, "problem document (JSON)")->required();
    belpl->add_option("--source", belpl_source, "source name")->required();
    belpl->add_option("--prop", belpl_prop, "proposition expression")->required();
    belpl->add_option("--approx", belpl_approx, "stepwise|deferred");
    belpl->add_option("--confidence", belpl_confidence, "min|average|interval");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fuse->parsed()) return run_fuse(fuse_args);
        if (validate->parsed()) return run_validate(validate_file);
        if (enumerate->parsed()) return run_enumerate(enumerate_file, enumerate_unicode);
        if (belpl->parsed())
            return run_belpl(belpl_file, belpl_source, belpl_prop, belpl_approx,
                             belpl_confidence);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const qbel::DegenerateProportionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOperationError;
    } catch (const qbel::FrameTooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOperationError;
    } catch (const qbel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidDocument;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOperationError;
    }
    return kExitOk;
}
