#include "latfrac/io.hpp"

#include <cstdio>
#include <fstream>

namespace latfrac {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(ctx + ": missing field '" + key + "'");
    return *it;
}

std::int64_t need_int(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number_integer()) throw parse_error(ctx + ": field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

double need_real(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number()) throw parse_error(ctx + ": field '" + key + "' must be a number");
    return v.get<double>();
}

LatticeIndex read_index(const json& v, int n, const std::string& ctx) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw parse_error(ctx + ": expected an array of " + std::to_string(n) + " integers");
    LatticeIndex idx(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        if (!v[static_cast<std::size_t>(d)].is_number_integer())
            throw parse_error(ctx + "[" + std::to_string(d) + "]: must be an integer");
        idx[static_cast<std::size_t>(d)] = v[static_cast<std::size_t>(d)].get<std::int64_t>();
    }
    return idx;
}

}  // namespace

json window_to_json(const CubeWindow& w) {
    return json{{"center", w.center}, {"radius", w.radius}};
}

CubeWindow window_from_json(const json& j, int n) {
    CubeWindow w;
    w.center = read_index(need(j, "center", "window"), n, "window.center");
    w.radius = need_int(j, "radius", "window");
    if (w.radius < 0) throw parse_error("window.radius: must be >= 0");
    return w;
}

json sequence_to_json(const LatticeSequence& b) {
    json out;
    out["n"] = b.dim();
    if (b.is_dense()) {
        json d = window_to_json(b.window());
        d["values"] = std::vector<double>(b.values().begin(), b.values().end());
        out["dense"] = std::move(d);
    } else {
        json arr = json::array();
        for (const auto& [idx, v] : b.entries()) arr.push_back(json::array({idx, v}));
        out["sparse"] = std::move(arr);
    }
    return out;
}

LatticeSequence sequence_from_json(const json& j) {
    const int n = static_cast<int>(need_int(j, "n", "sequence"));
    if (n < 1) throw parse_error("sequence.n: must be >= 1");
    const bool has_dense = j.contains("dense");
    const bool has_sparse = j.contains("sparse");
    if (has_dense == has_sparse)
        throw parse_error("sequence: exactly one of 'dense' or 'sparse' is required");
    if (has_dense) {
        const json& d = j["dense"];
        CubeWindow w = window_from_json(d, n);
        const json& vv = need(d, "values", "sequence.dense");
        if (!vv.is_array())
            throw parse_error("sequence.dense.values: must be an array of numbers");
        std::vector<double> vals;
        vals.reserve(vv.size());
        for (std::size_t k = 0; k < vv.size(); ++k) {
            if (!vv[k].is_number())
                throw parse_error("sequence.dense.values[" + std::to_string(k) + "]: must be a number");
            vals.push_back(vv[k].get<double>());
        }
        if (static_cast<std::int64_t>(vals.size()) != w.cardinality())
            throw parse_error("sequence.dense.values: has " + std::to_string(vals.size()) +
                              " entries, expected " + std::to_string(w.cardinality()));
        return LatticeSequence::dense(std::move(w), std::move(vals));
    }
    const json& s = j["sparse"];
    if (!s.is_array()) throw parse_error("sequence.sparse: must be an array");
    std::vector<std::pair<LatticeIndex, double>> entries;
    entries.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const std::string ctx = "sequence.sparse[" + std::to_string(k) + "]";
        if (!s[k].is_array() || s[k].size() != 2)
            throw parse_error(ctx + ": expected [[coords], value]");
        LatticeIndex idx = read_index(s[k][0], n, ctx + ".index");
        if (!s[k][1].is_number()) throw parse_error(ctx + ".value: must be a number");
        entries.emplace_back(std::move(idx), s[k][1].get<double>());
    }
    try {
        return LatticeSequence::sparse(n, std::move(entries));
    } catch (const invalid_parameter& e) {
        throw parse_error(std::string("sequence.sparse: ") + e.what());
    }
}

json spec_to_json(const FractionalSpec& s) {
    json mats = json::array();
    for (const auto& A : s.matrices) {
        json rows = json::array();
        for (int i = 0; i < A.dim(); ++i) {
            json row = json::array();
            for (int k = 0; k < A.dim(); ++k) row.push_back(A.at(i, k));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    return json{{"n", s.n},
                {"alpha", s.alpha},
                {"m", s.m()},
                {"exponents", s.exponents},
                {"matrices", std::move(mats)}};
}

FractionalSpec spec_from_json(const json& j) {
    FractionalSpec s;
    s.n = static_cast<int>(need_int(j, "n", "spec"));
    if (s.n < 1) throw parse_error("spec.n: must be >= 1");
    s.alpha = need_real(j, "alpha", "spec");
    const auto m = need_int(j, "m", "spec");
    const json& exps = need(j, "exponents", "spec");
    if (!exps.is_array() || static_cast<std::int64_t>(exps.size()) != m)
        throw parse_error("spec.exponents: expected an array of m = " + std::to_string(m) +
                          " numbers");
    for (std::size_t k = 0; k < exps.size(); ++k) {
        if (!exps[k].is_number())
            throw parse_error("spec.exponents[" + std::to_string(k) + "]: must be a number");
        s.exponents.push_back(exps[k].get<double>());
    }
    const json& mats = need(j, "matrices", "spec");
    if (!mats.is_array() || static_cast<std::int64_t>(mats.size()) != m)
        throw parse_error("spec.matrices: expected an array of m = " + std::to_string(m) +
                          " matrices");
    for (std::size_t k = 0; k < mats.size(); ++k) {
        const std::string ctx = "spec.matrices[" + std::to_string(k) + "]";
        const json& rows = mats[k];
        if (!rows.is_array() || static_cast<int>(rows.size()) != s.n)
            throw parse_error(ctx + ": expected " + std::to_string(s.n) + " rows");
        std::vector<std::int64_t> entries;
        entries.reserve(static_cast<std::size_t>(s.n) * s.n);
        for (int r = 0; r < s.n; ++r) {
            const json& row = rows[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<int>(row.size()) != s.n)
                throw parse_error(ctx + " row " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(s.n));
            for (int c = 0; c < s.n; ++c) {
                if (!row[static_cast<std::size_t>(c)].is_number_integer())
                    throw parse_error(ctx + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                      "]: must be an integer");
                entries.push_back(row[static_cast<std::size_t>(c)].get<std::int64_t>());
            }
        }
        s.matrices.emplace_back(s.n, std::move(entries));
    }
    return s;
}

json operator_result_to_json(const OperatorResult& r) {
    json out = sequence_to_json(r.values);
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(r.meta.spec_hash));
    json meta{{"window", window_to_json(r.meta.window)},
              {"spec_hash", hash},
              {"wall_ms", r.meta.wall_ms}};
    if (r.meta.has_tail) {
        meta["tail_bound"] = r.meta.tail_bound;
        meta["q"] = r.meta.q;
    }
    out["metadata"] = std::move(meta);
    return out;
}

json atom_to_json(const Atom& a) {
    json out = sequence_to_json(a.seq);
    out["p"] = a.p;
    out["d_p"] = a.degree;
    out["cube"] = window_to_json(a.cube);
    if (a.has_certificate()) {
        json exact;
        exact["profile"] = a.profile;
        exact["scale_num"] = a.scale.get_num().get_str();
        exact["scale_den"] = a.scale.get_den().get_str();
        out["exact"] = std::move(exact);
    }
    return out;
}

Atom atom_from_json(const json& j) {
    Atom a;
    a.seq = sequence_from_json(j);
    a.p = need_real(j, "p", "atom");
    a.degree = static_cast<int>(need_int(j, "d_p", "atom"));
    a.cube = window_from_json(need(j, "cube", "atom"), a.seq.dim());
    if (j.contains("exact")) {
        const json& e = j["exact"];
        const json& prof = need(e, "profile", "atom.exact");
        if (!prof.is_array() || static_cast<std::int64_t>(prof.size()) != a.cube.cardinality())
            throw parse_error("atom.exact.profile: size must equal the cube cardinality");
        for (const auto& v : prof) a.profile.push_back(v.get<long long>());
        const std::string num = need(e, "scale_num", "atom.exact").get<std::string>();
        const std::string den = need(e, "scale_den", "atom.exact").get<std::string>();
        a.scale = mpq_class(mpz_class(num), mpz_class(den));
        a.scale.canonicalize();
    }
    return a;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write file: " + path);
    out << text;
}

}  // namespace latfrac
