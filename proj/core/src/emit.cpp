#include "latcap/emit.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "latcap/errors.hpp"

namespace latcap {

void atomic_write_file(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot open for writing: " + tmp);
        os.write(contents.data(), std::streamsize(contents.size()));
        os.flush();
        if (!os) throw ConfigError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("rename failed: " + path);
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

namespace {

const char* kRatioHeader =
    "kind,d,shape,N,driver,regime_parameter,replica,value,cap_method,seed,wall_time_ms\n";

void append_rows(std::string& out, const RatioEstimate& est, const std::vector<ReplicaRow>& rows) {
    const std::string prefix = ratio_kind_name(est.kind) + "," + std::to_string(est.d) + "," +
                               csv_escape(est.shape) + "," + std::to_string(est.N) + "," +
                               format_double(est.driver) + "," +
                               format_double(est.regime_parameter) + ",";
    for (const auto& r : rows) {
        out += prefix;
        out += std::to_string(r.replica);
        out += ",";
        out += format_double(r.value);
        out += ",";
        out += r.cap_method;
        out += ",";
        out += std::to_string(est.seed);
        out += ",";
        out += format_double(r.wall_ms);
        out += "\n";
    }
}

}  // namespace

std::string sweep_csv(const SweepRecord& rec) {
    std::string out = kRatioHeader;
    for (const auto& pt : rec.points) append_rows(out, pt.est, pt.rows);
    return out;
}

std::string ratio_csv(const RatioResult& res) {
    std::string out = kRatioHeader;
    append_rows(out, res.est, res.rows);
    return out;
}

std::string sweep_json(const SweepRecord& rec) {
    nlohmann::json j;
    j["kind"] = ratio_kind_name(rec.kind);
    j["d"] = rec.d;
    j["shape"] = rec.shape;
    j["seed"] = rec.seed;
    j["points"] = nlohmann::json::array();
    for (const auto& pt : rec.points) {
        nlohmann::json p;
        p["N"] = pt.N;
        p["requested_regime"] = pt.requested_regime;
        p["regime_parameter"] = pt.est.regime_parameter;
        p["driver"] = pt.est.driver;
        p["theta"] = pt.est.theta_value;
        p["mean"] = pt.est.mean;
        p["stderr"] = pt.est.se;
        p["replicas"] = pt.est.replicas;
        j["points"].push_back(std::move(p));
    }
    return j.dump(2) + "\n";
}

std::string sweep_svg(const SweepRecord& rec) {
    const int W = 720, H = 480, ML = 64, MR = 24, MT = 24, MB = 48;
    double xmin = 1e300, xmax = -1e300;
    for (const auto& pt : rec.points) {
        double x = std::log10(std::max(1e-12, pt.est.regime_parameter));
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    if (xmax <= xmin) xmax = xmin + 1;
    auto X = [&](double regime) {
        double x = std::log10(std::max(1e-12, regime));
        return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto Y = [&](double v) { return MT + (1.0 - v) * (H - MT - MB); };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::string svg;
    char buf[256];
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"#444\"/>\n",
                  ML, MT, W - ML - MR, H - MT - MB);
    svg += buf;
    for (double v = 0; v <= 1.0001; v += 0.25) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" stroke=\"#ddd\"/>"
                      "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\">%.2f</text>\n",
                      ML, Y(v), W - MR, Y(v), ML - 6, Y(v) + 4, v);
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">regime parameter (log scale), "
                  "kind=%s d=%d %s</text>\n",
                  (ML + W - MR) / 2, H - 12, ratio_kind_name(rec.kind).c_str(), rec.d,
                  rec.shape.c_str());
    svg += buf;

    // group points by N preserving insertion order
    std::vector<std::int64_t> Ns;
    for (const auto& pt : rec.points)
        if (std::find(Ns.begin(), Ns.end(), pt.N) == Ns.end()) Ns.push_back(pt.N);
    for (std::size_t ni = 0; ni < Ns.size(); ++ni) {
        const char* color = colors[ni % 6];
        std::string poly;
        for (const auto& pt : rec.points) {
            if (pt.N != Ns[ni]) continue;
            double x = X(pt.est.regime_parameter), y = Y(pt.est.mean);
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", x, y);
            poly += buf;
            double e = 2 * pt.est.se;
            std::snprintf(buf, sizeof(buf),
                          "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\"/>"
                          "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"%s\"/>\n",
                          x, Y(std::min(1.0, pt.est.mean + e)), x, Y(std::max(0.0, pt.est.mean - e)),
                          color, x, y, color);
            svg += buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\"/>\n"
                      "<text x=\"%d\" y=\"%d\" fill=\"%s\">N=%lld</text>\n",
                      poly.c_str(), color, W - MR - 64, MT + 16 + int(ni) * 16, color,
                      static_cast<long long>(Ns[ni]));
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

std::string lln_csv(const CapacityLlnResult& res, std::uint64_t seed) {
    std::string out = "d,n,replica,normalized_value,seed\n";
    for (const auto& pt : res.points) {
        for (std::size_t r = 0; r < pt.normalized.size(); ++r) {
            out += std::to_string(res.d) + "," + std::to_string(pt.n) + "," + std::to_string(r) +
                   "," + format_double(pt.normalized[r]) + "," + std::to_string(seed) + "\n";
        }
    }
    return out;
}

std::string lln_json(const CapacityLlnResult& res, std::uint64_t seed) {
    nlohmann::json j;
    j["d"] = res.d;
    j["seed"] = seed;
    if (res.d >= 5) j["alpha_estimate"] = res.alpha_estimate;
    j["points"] = nlohmann::json::array();
    for (const auto& pt : res.points) {
        nlohmann::json p;
        p["n"] = pt.n;
        p["mean"] = pt.mean;
        p["stderr"] = pt.se;
        p["replicas"] = pt.normalized.size();
        j["points"].push_back(std::move(p));
    }
    return j.dump(2) + "\n";
}

namespace {
std::string coords_header(int d) {
    std::string h;
    for (int i = 0; i < d; ++i) h += "x" + std::to_string(i + 1) + ",";
    return h;
}
}  // namespace

std::string profile_csv(const EquilibriumProfile& prof) {
    const DomainInstance& K = *prof.support;
    std::string out = coords_header(K.dim()) + "e,ebar\n";
    for (std::size_t i = 0; i < K.size(); ++i) {
        const Point& p = K.point(std::int32_t(i));
        for (int k = 0; k < K.dim(); ++k) out += std::to_string(p[k]) + ",";
        out += format_double(prof.e[i]) + "," + format_double(prof.ebar[i]) + "\n";
    }
    return out;
}

std::string points_csv(const std::vector<Point>& pts, int d) {
    std::string out = coords_header(d);
    if (!out.empty()) out.back() = '\n';
    for (const Point& p : pts) {
        for (int k = 0; k < d; ++k) {
            out += std::to_string(p[k]);
            out += (k + 1 < d) ? ',' : '\n';
        }
    }
    return out;
}

std::string eigen_csv(const EigenPair& pair) {
    const DomainInstance& A = *pair.domain;
    std::string out = coords_header(A.dim()) + "phi\n";
    for (std::size_t i = 0; i < A.size(); ++i) {
        const Point& p = A.point(std::int32_t(i));
        for (int k = 0; k < A.dim(); ++k) out += std::to_string(p[k]) + ",";
        out += format_double(pair.phi[i]) + "\n";
    }
    return out;
}

}  // namespace latcap
