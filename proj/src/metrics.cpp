#include "hiercls/metrics.hpp"

#include <charconv>
#include <map>
#include <ostream>
#include <sstream>

#include "hiercls/error.hpp"
#include "hiercls/numfmt.hpp"

namespace hiercls {

void write_metrics_header(std::ostream& out) { out << "method,seed,step,split,accuracy,loss\n"; }

void write_metrics_rows(std::ostream& out, const RunMetrics& run) {
    const std::string_view method = to_string(run.method);
    for (const auto& c : run.checkpoints) {
        out << method << ',' << run.seed << ',' << c.step << ",train," << format_double(c.train_accuracy) << ','
            << format_double(c.train_loss) << '\n';
        if (c.val_accuracy) {
            out << method << ',' << run.seed << ',' << c.step << ",val," << format_double(*c.val_accuracy) << ','
                << format_double(c.val_loss.value_or(0.0)) << '\n';
        }
    }
}

std::string metrics_csv(const std::vector<RunMetrics>& runs) {
    std::ostringstream out;
    write_metrics_header(out);
    for (const auto& r : runs) write_metrics_rows(out, r);
    return out.str();
}

namespace {

std::uint64_t parse_u64(std::string_view text, std::size_t line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) throw ParseError(line, "invalid integer");
    return v;
}

double parse_number(std::string_view text, std::size_t line) {
    const auto v = parse_double(text);
    if (!v) throw ParseError(line, "invalid number '" + std::string(text) + "'");
    return *v;
}

}  // namespace

std::vector<RunMetrics> parse_metrics_csv(const std::string& text, PredictionMode mode) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != "method,seed,step,split,accuracy,loss")
        throw ParseError(1, "expected metrics header");

    std::vector<RunMetrics> runs;
    std::map<std::pair<std::string, std::uint64_t>, std::size_t> index;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> cols;
        std::string_view rest(line);
        for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos; rest.remove_prefix(comma + 1))
            cols.push_back(rest.substr(0, comma));
        cols.push_back(rest);
        if (cols.size() != 6) throw ParseError(line_no, "expected 6 columns");

        const HeadKind method = parse_head_kind(cols[0]);
        const std::uint64_t seed = parse_u64(cols[1], line_no);
        const std::uint64_t step = parse_u64(cols[2], line_no);
        const double acc = parse_number(cols[4], line_no);
        const double loss = parse_number(cols[5], line_no);

        const auto key = std::make_pair(std::string(cols[0]), seed);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, runs.size()).first;
            runs.push_back({method, mode, seed, {}});
        }
        auto& cps = runs[it->second].checkpoints;
        if (cols[3] == "train") {
            if (!cps.empty() && cps.back().step >= step) throw ParseError(line_no, "steps must be strictly increasing");
            cps.push_back({step, acc, loss, std::nullopt, std::nullopt});
        } else if (cols[3] == "val") {
            if (cps.empty() || cps.back().step != step) throw ParseError(line_no, "val row without matching train row");
            cps.back().val_accuracy = acc;
            cps.back().val_loss = loss;
        } else {
            throw ParseError(line_no, "split must be train or val");
        }
    }
    return runs;
}

RunMetrics average_runs(const std::vector<RunMetrics>& runs) {
    if (runs.empty()) throw GridMismatch("no runs to average");
    RunMetrics avg = runs.front();
    const double n = static_cast<double>(runs.size());
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].checkpoints.size() != avg.checkpoints.size()) throw GridMismatch("runs have different checkpoint counts");
        for (std::size_t i = 0; i < avg.checkpoints.size(); ++i) {
            const auto& c = runs[r].checkpoints[i];
            auto& a = avg.checkpoints[i];
            if (c.step != a.step || c.val_accuracy.has_value() != a.val_accuracy.has_value())
                throw GridMismatch("runs have different checkpoint grids");
            a.train_accuracy += c.train_accuracy;
            a.train_loss += c.train_loss;
            if (a.val_accuracy) {
                *a.val_accuracy += *c.val_accuracy;
                *a.val_loss += *c.val_loss;
            }
        }
    }
    for (auto& a : avg.checkpoints) {
        a.train_accuracy /= n;
        a.train_loss /= n;
        if (a.val_accuracy) {
            *a.val_accuracy /= n;
            *a.val_loss /= n;
        }
    }
    return avg;
}

}  // namespace hiercls
