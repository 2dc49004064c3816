#include "sts/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sts {

namespace {

constexpr const char* kTraceMagic = "# sts-trace v1";
constexpr const char* kLogMagic = "# sts-log v1";
constexpr const char* kTraceHeader = "t,Fhx,Fhy,Fgx,Fgy,Mgz,hx,hy";
constexpr const char* kLogHeader =
    "t,Fhx,Fhy,Fgx,Fgy,Mgz,hx,hy,fFhx,fFhy,fFgx,fFgy,dFhy,dFgy,cop_x,cop_v,"
    "nu1_raw,nu1_used,nu2,mode,cmd_x,cmd_y";

std::string fmt(double v) {
    // 17 significant digits: doubles survive the text round trip exactly,
    // which open-loop replay of a recorded log depends on.
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, int lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw TraceFormatError("line " + std::to_string(lineno) + ": bad number '" + s + "'");
    }
}

std::ifstream open_checked(const std::string& path, const char* magic,
                           const std::string& header_prefix, int& lineno) {
    std::ifstream in(path);
    if (!in) throw TraceFormatError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != magic) {
        throw TraceFormatError(path + ": missing or wrong version line (expected '" +
                               std::string(magic) + "')");
    }
    if (!std::getline(in, line) || line.rfind(header_prefix, 0) != 0) {
        throw TraceFormatError(path + ": wrong column header");
    }
    lineno = 2;
    return in;
}

}  // namespace

void write_trace(const std::string& path, const LabeledTrace& trace, bool with_phase) {
    std::ofstream out(path);
    if (!out) throw TraceFormatError("cannot write " + path);
    const bool phases = with_phase && trace.labels.size() == trace.frames.size();
    out << kTraceMagic << "\n" << kTraceHeader << (phases ? ",phase" : "") << "\n";
    for (std::size_t i = 0; i < trace.frames.size(); ++i) {
        const auto& f = trace.frames[i];
        out << fmt(f.t) << ',' << fmt(f.fhx) << ',' << fmt(f.fhy) << ',' << fmt(f.fgx) << ','
            << fmt(f.fgy) << ',' << fmt(f.mgz) << ',' << fmt(f.hx) << ',' << fmt(f.hy);
        if (phases) out << ',' << phase_name(trace.labels[i]);
        out << '\n';
    }
}

LabeledTrace read_trace(const std::string& path) {
    int lineno = 0;
    std::ifstream in = open_checked(path, kTraceMagic, kTraceHeader, lineno);
    LabeledTrace trace;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != 8 && fields.size() != 9) {
            throw TraceFormatError("line " + std::to_string(lineno) + ": expected 8 or 9 fields");
        }
        SensorFrame f;
        f.t = parse_double(fields[0], lineno);
        f.fhx = parse_double(fields[1], lineno);
        f.fhy = parse_double(fields[2], lineno);
        f.fgx = parse_double(fields[3], lineno);
        f.fgy = parse_double(fields[4], lineno);
        f.mgz = parse_double(fields[5], lineno);
        f.hx = parse_double(fields[6], lineno);
        f.hy = parse_double(fields[7], lineno);
        if (!trace.frames.empty() && f.t <= trace.frames.back().t) {
            throw TraceFormatError("line " + std::to_string(lineno) + ": non-monotone timestamp");
        }
        trace.frames.push_back(f);
        if (fields.size() == 9) trace.labels.push_back(phase_from_name(fields[8]));
    }
    if (!trace.labels.empty() && trace.labels.size() != trace.frames.size()) {
        throw TraceFormatError(path + ": mixed labeled/unlabeled rows");
    }
    return trace;
}

void write_log(const std::string& path, const std::vector<LogRecord>& records) {
    std::ofstream out(path);
    if (!out) throw TraceFormatError("cannot write " + path);
    out << kLogMagic << "\n" << kLogHeader << "\n";
    for (const auto& r : records) {
        const auto& f = r.frame;
        const auto& ft = r.features;
        out << fmt(f.t) << ',' << fmt(f.fhx) << ',' << fmt(f.fhy) << ',' << fmt(f.fgx) << ','
            << fmt(f.fgy) << ',' << fmt(f.mgz) << ',' << fmt(f.hx) << ',' << fmt(f.hy) << ','
            << fmt(ft.fhx) << ',' << fmt(ft.fhy) << ',' << fmt(ft.fgx) << ',' << fmt(ft.fgy)
            << ',' << fmt(ft.dfhy) << ',' << fmt(ft.dfgy) << ',' << fmt(ft.cop_x) << ','
            << fmt(ft.cop_v) << ',' << fmt(r.nu1_raw) << ',' << fmt(r.nu1_used) << ','
            << fmt(r.nu2) << ',' << mode_name(r.mode) << ',' << fmt(r.cmd.x) << ','
            << fmt(r.cmd.y) << '\n';
    }
}

std::vector<LogRecord> read_log(const std::string& path) {
    int lineno = 0;
    std::ifstream in = open_checked(path, kLogMagic, kLogHeader, lineno);
    std::vector<LogRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != 22) {
            throw TraceFormatError("line " + std::to_string(lineno) + ": expected 22 fields");
        }
        LogRecord r;
        auto d = [&](int i) { return parse_double(fields[i], lineno); };
        r.frame = {d(0), d(1), d(2), d(3), d(4), d(5), d(6), d(7)};
        r.features.fhx = d(8);
        r.features.fhy = d(9);
        r.features.fgx = d(10);
        r.features.fgy = d(11);
        r.features.dfhy = d(12);
        r.features.dfgy = d(13);
        r.features.cop_x = d(14);
        r.features.cop_v = d(15);
        r.nu1_raw = d(16);
        r.nu1_used = d(17);
        r.nu2 = d(18);
        r.mode = mode_from_name(fields[19]);
        r.cmd = {d(20), d(21)};
        if (!records.empty() && r.frame.t <= records.back().frame.t) {
            throw TraceFormatError("line " + std::to_string(lineno) + ": non-monotone timestamp");
        }
        records.push_back(r);
    }
    return records;
}

LabeledTrace read_frames(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw TraceFormatError("cannot open " + path);
    std::string first;
    std::getline(probe, first);
    probe.close();
    if (first == kLogMagic) {
        LabeledTrace trace;
        for (const auto& r : read_log(path)) trace.frames.push_back(r.frame);
        return trace;
    }
    return read_trace(path);
}

}  // namespace sts
