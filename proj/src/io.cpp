#include "wfg/io.hpp"

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

#include <bit>
#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <unistd.h>

namespace wfg {

namespace detail {
const std::map<std::string, std::string>& embedded_schemas();
}

namespace {

namespace rj = rapidjson;

class SchemaStore : public rj::IRemoteSchemaDocumentProvider {
public:
    const rj::SchemaDocument* GetRemoteDocument(const char* uri, rj::SizeType len) override {
        // rapidjson 1.1.0 passes one character short of the '#'; the ref string continues past len.
        std::string name(uri, len);
        if (uri[len] != '#') name.push_back(uri[len]);
        return &get(name);
    }

    const rj::SchemaDocument& get(const std::string& name) {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = docs_.find(name);
        if (it != docs_.end()) return *it->second;
        rj::Document d;
        d.Parse(schema_text(name).c_str());
        if (d.HasParseError()) throw Error("schema " + name + " is not valid JSON");
        auto doc = std::make_unique<rj::SchemaDocument>(d, this);
        return *docs_.emplace(name, std::move(doc)).first->second;
    }

private:
    std::recursive_mutex mu_;
    std::map<std::string, std::unique_ptr<rj::SchemaDocument>> docs_;
};

SchemaStore& store() {
    static SchemaStore s;
    return s;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line, col = 1;
        else ++col;
    }
    return {line, col};
}

void check_schema(const rj::Document& d, const std::string& schema, const std::string& source) {
    rj::SchemaValidator v(store().get(schema));
    if (d.Accept(v)) return;
    rj::StringBuffer field, rule;
    v.GetInvalidDocumentPointer().StringifyUriFragment(field);
    v.GetInvalidSchemaPointer().StringifyUriFragment(rule);
    std::string f = field.GetString();
    if (f.size() > 1 && f[0] == '#') f = f.substr(1);
    if (f.empty() || f == "#") f = "/";
    throw ConfigError(source + ": field " + f + " violates '" + v.GetInvalidSchemaKeyword() + "' (schema " +
                      schema + rule.GetString() + ")");
}

}  // namespace

const std::string& schema_text(const std::string& name) {
    const auto& m = detail::embedded_schemas();
    auto it = m.find(name);
    if (it == m.end()) throw Error("unknown schema '" + name + "'");
    return it->second;
}

nlohmann::json parse_validated(const std::string& text, const std::string& schema, const std::string& source) {
    rj::Document d;
    d.Parse(text.c_str());
    if (d.HasParseError()) {
        auto [l, c] = line_col(text, d.GetErrorOffset());
        throw ConfigError(source + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " +
                          rj::GetParseError_En(d.GetParseError()));
    }
    check_schema(d, schema, source);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(source + ": " + e.what());
    }
}

void validate_json(const nlohmann::json& doc, const std::string& schema, const std::string& source) {
    rj::Document d;
    const std::string text = doc.dump();
    d.Parse(text.c_str());
    if (d.HasParseError()) throw ConfigError(source + ": not serializable as JSON");
    check_schema(d, schema, source);
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::filesystem::path& p, const std::string& text) {
    namespace fs = std::filesystem;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    const fs::path tmp = p.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename onto " + p.string() + ": " + ec.message());
    }
}

std::string encode_payload(const CVec& v) {
    using namespace boost::archive::iterators;
    using It = base64_from_binary<transform_width<const char*, 6, 8>>;
    std::string bytes(v.size() * 16, '\0');
    for (std::size_t i = 0; i < v.size(); ++i) {
        double parts[2] = {v[i].real(), v[i].imag()};
        for (int k = 0; k < 2; ++k) {
            auto u = std::bit_cast<std::uint64_t>(parts[k]);
            if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
            std::memcpy(&bytes[16 * i + 8 * k], &u, 8);
        }
    }
    std::string out(It(bytes.data()), It(bytes.data() + bytes.size()));
    out.append((3 - bytes.size() % 3) % 3, '=');
    return out;
}

CVec decode_payload(const std::string& b64, std::size_t count) {
    using namespace boost::archive::iterators;
    using It = transform_width<binary_from_base64<const char*>, 8, 6>;
    std::string s = b64;
    std::size_t pad = 0;
    while (!s.empty() && s.back() == '=' && pad < 2) s.pop_back(), ++pad;
    if (s.size() % 4 == 1) throw ConfigError("payload: truncated base64");
    std::string bytes;
    try {
        bytes.assign(It(s.data()), It(s.data() + s.size()));
    } catch (const std::exception&) {
        throw ConfigError("payload: invalid base64 character");
    }
    // transform_width may emit a trailing partial byte from the final group.
    const std::size_t exact = s.size() * 6 / 8;
    if (bytes.size() > exact) bytes.resize(exact);
    if (bytes.size() != count * 16)
        throw ConfigError("payload: expected " + std::to_string(count * 16) + " bytes, found " + std::to_string(bytes.size()));
    CVec v(count);
    for (std::size_t i = 0; i < count; ++i) {
        double parts[2];
        for (int k = 0; k < 2; ++k) {
            std::uint64_t u;
            std::memcpy(&u, &bytes[16 * i + 8 * k], 8);
            if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
            parts[k] = std::bit_cast<double>(u);
        }
        if (!std::isfinite(parts[0]) || !std::isfinite(parts[1]))
            throw ConfigError("payload: non-finite sample at index " + std::to_string(i));
        v[i] = {parts[0], parts[1]};
    }
    return v;
}

nlohmann::json signal_to_json(const SampledSignal& u) {
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : u.meta) meta[k] = v;
    return {{"format", "wfg-signal"},
            {"version", 1},
            {"d", u.axis.d},
            {"L", u.axis.L},
            {"n", u.axis.n},
            {"label", u.label},
            {"boundary_mass", u.boundary_mass},
            {"meta", meta},
            {"warnings", u.warnings},
            {"encoding", "base64-f64le-interleaved"},
            {"payload", encode_payload(u.values)}};
}

SampledSignal signal_from_json(const nlohmann::json& j) {
    validate_json(j, "signal.schema.json", "signal");
    AxisSpec ax;
    try {
        ax = AxisSpec(j["L"].get<double>(), j["n"].get<int>(), j["d"].get<int>());
    } catch (const GridError& e) {
        throw ConfigError(std::string("signal: ") + e.what());
    }
    SampledSignal u(ax, decode_payload(j["payload"].get<std::string>(), ax.size()), j["label"].get<std::string>());
    if (j.contains("meta"))
        for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it) u.meta[it.key()] = it.value().get<double>();
    if (j.contains("warnings")) u.warnings = j["warnings"].get<std::vector<std::string>>();
    return u;
}

void save_signal(const std::filesystem::path& p, const SampledSignal& u) {
    write_text_atomic(p, signal_to_json(u).dump(1) + "\n");
}

SampledSignal load_signal(const std::filesystem::path& p) {
    const auto j = parse_validated(read_text(p), "signal.schema.json", p.string());
    return signal_from_json(j);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string report_csv(const WaveFrontReport& r) {
    std::string out = "direction_deg,abscissa,sup,fitted_order,class\n";
    for (std::size_t i = 0; i < r.directions.size(); ++i) {
        const auto& f = r.fits[i];
        const std::string deg = format_double(r.directions[i].w.size() == 2 ? r.directions[i].degrees() : NAN);
        if (f.abscissae.empty()) out += deg + ",nan,nan," + format_double(f.fitted_order) + "," + to_string(f.classification) + "\n";
        for (std::size_t k = 0; k < f.abscissae.size(); ++k)
            out += deg + "," + format_double(f.abscissae[k]) + "," + format_double(f.sup_values[k]) + "," +
                   format_double(f.fitted_order) + "," + to_string(f.classification) + "\n";
    }
    return out;
}

}  // namespace wfg
