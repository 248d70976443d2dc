#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmrmr/error.hpp"
#include "fmrmr/harness.hpp"

namespace fmrmr {

std::string format_double(double x) {
    char buf[64];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace {

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_runs_csv(const std::string& path, std::span<const RunRecord> records) {
    std::string s = "model_id,n,method,classifier,run,dim,accuracy\n";
    for (const auto& r : records) {
        s += r.model_id + ',' + std::to_string(r.n) + ',' + r.method + ',' + r.classifier + ',' +
             std::to_string(r.run) + ',' + std::to_string(r.dim) + ',' + format_double(r.accuracy) + '\n';
    }
    write_text_file(path, s);
}

std::vector<RunRecord> read_runs_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("empty runs file", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "model_id,n,method,classifier,run,dim,accuracy") throw ParseError("unexpected runs header", 1);
    std::vector<RunRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw ParseError("expected 7 fields", line_no);
        RunRecord r;
        try {
            std::size_t pos = 0;
            r.model_id = f[0];
            r.n = std::stoul(f[1]);
            r.method = f[2];
            r.classifier = f[3];
            r.run = std::stoul(f[4]);
            r.dim = std::stoul(f[5]);
            r.accuracy = std::stod(f[6], &pos);
            if (pos != f[6].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError("malformed runs row", line_no);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string summary_csv(const ExperimentReport& rep) {
    std::string s = "classifier,output,n";
    for (const auto& m : rep.methods) s += ',' + m;
    s += '\n';
    const char* rows[] = {"Average accuracy", "Average dim. red", "Victories over Base"};
    for (const auto& clf : rep.classifiers) {
        for (int row = 0; row < 3; ++row) {
            for (auto n : rep.sample_sizes) {
                s += clf + ',' + rows[row] + ',' + std::to_string(n);
                for (const auto& m : rep.methods) {
                    s += ',';
                    const CellSummary* c = rep.find(clf, n, m);
                    if (!c) {
                        s += '-';
                    } else if (row == 0) {
                        s += fixed(100.0 * c->mean_accuracy, 2);
                    } else if (row == 1) {
                        s += fixed(c->mean_dim, 1);
                    } else {
                        s += c->victories ? std::to_string(*c->victories) : std::string("-");
                    }
                }
                s += '\n';
            }
        }
    }
    return s;
}

std::string model_summary_csv(const ExperimentReport& rep) {
    std::string s = "model_id,n,classifier,method,runs,mean_accuracy,mean_dim\n";
    for (const auto& m : rep.per_model) {
        s += m.model_id + ',' + std::to_string(m.n) + ',' + m.classifier + ',' + m.method + ',' +
             std::to_string(m.runs) + ',' + format_double(m.mean_accuracy) + ',' + format_double(m.mean_dim) + '\n';
    }
    return s;
}

std::string rankings_csv(const ExperimentReport& rep) {
    std::vector<std::string> ranked;
    for (const auto& m : rep.methods)
        if (m != "Base") ranked.push_back(m);
    std::string s = "classifier,criterion,n";
    for (const auto& m : ranked) s += ',' + m;
    s += '\n';
    for (RankingScheme scheme : {RankingScheme::Relative, RankingScheme::Positional, RankingScheme::F1}) {
        for (const auto& clf : rep.classifiers) {
            for (auto n : rep.sample_sizes) {
                const RankingSummary* found = nullptr;
                for (const auto& r : rep.rankings)
                    if (r.classifier == clf && r.n == n && r.scheme == scheme) found = &r;
                if (!found) continue;
                s += clf + ',' + std::string(ranking_name(scheme)) + ',' + std::to_string(n);
                for (const auto& m : ranked) {
                    auto it = found->mean_score.find(m);
                    s += ',' + (it == found->mean_score.end() ? std::string("-") : fixed(it->second, 2));
                }
                s += '\n';
            }
        }
    }
    return s;
}

void write_report_files(const std::string& dir, std::span<const RunRecord> records, const ExperimentReport& report) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    const std::filesystem::path d(dir);
    write_runs_csv((d / "runs.csv").string(), records);
    write_text_file((d / "summary.csv").string(), summary_csv(report));
    write_text_file((d / "per_model.csv").string(), model_summary_csv(report));
    write_text_file((d / "rankings.csv").string(), rankings_csv(report));
}

}  // namespace fmrmr
