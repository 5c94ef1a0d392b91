#include "automlc/dataset/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "automlc/core/rng.hpp"

namespace automlc {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool starts_with_ci(const std::string& line, const char* kw) {
    const std::size_t n = std::strlen(kw);
    if (line.size() < n) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (std::tolower(static_cast<unsigned char>(line[i])) != kw[i]) return false;
    return true;
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') || (s.front() == '"' && s.back() == '"')))
        return s.substr(1, s.size() - 2);
    return s;
}

// Splits on `sep` respecting single/double quotes.
std::vector<std::string> split_respecting_quotes(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    char quote = 0;
    for (char c : s) {
        if (quote) {
            cur.push_back(c);
            if (c == quote) quote = 0;
        } else if (c == '\'' || c == '"') {
            quote = c;
            cur.push_back(c);
        } else if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& tok, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw MalformedRow("line " + std::to_string(line_no) + ": not a number: '" + tok + "'");
    }
}

// Extracts the -C option from a relation name; returns the remaining name.
int extract_label_count(const std::string& raw, std::string& name_out) {
    std::istringstream iss(raw);
    std::vector<std::string> toks;
    std::string t;
    while (iss >> t) toks.push_back(t);
    int count = 0;
    bool found = false;
    std::string rest;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (!found && toks[i] == "-C" && i + 1 < toks.size()) {
            try {
                std::size_t pos = 0;
                count = std::stoi(toks[i + 1], &pos);
                if (pos != toks[i + 1].size()) throw std::invalid_argument(toks[i + 1]);
            } catch (const std::exception&) {
                throw MissingLabelCount("relation option -C is not an integer: '" + toks[i + 1] + "'");
            }
            found = true;
            ++i;
            continue;
        }
        if (!rest.empty()) rest.push_back(' ');
        rest += toks[i];
    }
    if (!found) throw MissingLabelCount("relation name carries no -C option: '" + raw + "'");
    name_out = rest;
    // a trailing ':' commonly separates the name from the options
    if (!name_out.empty() && name_out.back() == ':') name_out.pop_back();
    return count;
}

struct RawAttribute {
    std::string name;
    AttrKind kind;
    std::vector<std::string> categories;
};

RawAttribute parse_attribute_line(const std::string& line, std::size_t line_no) {
    // @attribute <name> <type>
    std::string rest = trim(line.substr(std::strlen("@attribute")));
    std::string name;
    std::size_t pos = 0;
    if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
        const char q = rest[0];
        const std::size_t end = rest.find(q, 1);
        if (end == std::string::npos) throw ArffError("line " + std::to_string(line_no) + ": unterminated attribute name");
        name = rest.substr(1, end - 1);
        pos = end + 1;
    } else {
        const std::size_t end = rest.find_first_of(" \t");
        if (end == std::string::npos) throw ArffError("line " + std::to_string(line_no) + ": attribute without a type");
        name = rest.substr(0, end);
        pos = end;
    }
    std::string type = trim(rest.substr(pos));
    if (type.empty()) throw ArffError("line " + std::to_string(line_no) + ": attribute without a type");

    RawAttribute attr;
    attr.name = name;
    if (type.front() == '{') {
        if (type.back() != '}') throw ArffError("line " + std::to_string(line_no) + ": unterminated category list");
        attr.kind = AttrKind::Nominal;
        for (const std::string& c : split_respecting_quotes(type.substr(1, type.size() - 2), ',')) {
            std::string cat = strip_quotes(trim(c));
            if (cat.empty()) throw ArffError("line " + std::to_string(line_no) + ": empty category");
            if (std::find(attr.categories.begin(), attr.categories.end(), cat) != attr.categories.end())
                throw ArffError("line " + std::to_string(line_no) + ": duplicate category '" + cat + "'");
            attr.categories.push_back(std::move(cat));
        }
        if (attr.categories.empty()) throw ArffError("line " + std::to_string(line_no) + ": empty category list");
    } else {
        const std::string lt = lower(type);
        if (lt == "numeric" || lt == "real" || lt == "integer") {
            attr.kind = AttrKind::Numeric;
        } else {
            throw UnsupportedAttributeType("line " + std::to_string(line_no) + ": unsupported attribute type '" + type + "'");
        }
    }
    return attr;
}

int nominal_index(const RawAttribute& attr, const std::string& value, std::size_t line_no) {
    const std::string v = strip_quotes(value);
    for (std::size_t i = 0; i < attr.categories.size(); ++i)
        if (attr.categories[i] == v) return static_cast<int>(i);
    throw UnknownCategory("line " + std::to_string(line_no) + ": value '" + v + "' not a category of '" + attr.name + "'");
}

std::string format_double(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool needs_quoting(const std::string& s) {
    if (s.empty()) return true;
    return s.find_first_of(" \t,{}%'\"") != std::string::npos;
}

std::string quoted(const std::string& s) { return needs_quoting(s) ? "'" + s + "'" : s; }

}  // namespace

LabeledDataset parse_arff(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    std::string relation_raw;
    std::vector<RawAttribute> attrs;
    bool in_data = false;
    std::vector<std::vector<double>> rows;  // raw values over ALL attributes; NaN = missing

    auto parse_cell = [&](const RawAttribute& attr, const std::string& tok, std::size_t ln) -> double {
        const std::string v = trim(tok);
        if (v == "?") return missing_value();
        if (attr.kind == AttrKind::Numeric) return parse_number(v, ln);
        return static_cast<double>(nominal_index(attr, v, ln));
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;

        if (!in_data) {
            if (starts_with_ci(t, "@relation")) {
                relation_raw = strip_quotes(trim(t.substr(std::strlen("@relation"))));
            } else if (starts_with_ci(t, "@attribute")) {
                attrs.push_back(parse_attribute_line(t, line_no));
            } else if (starts_with_ci(t, "@data")) {
                in_data = true;
            } else {
                throw ArffError("line " + std::to_string(line_no) + ": unexpected header line");
            }
            continue;
        }

        // data row
        std::vector<double> row(attrs.size(), 0.0);
        if (t.front() == '{') {
            if (t.back() != '}') throw MalformedRow("line " + std::to_string(line_no) + ": unterminated sparse row");
            const std::string body = trim(t.substr(1, t.size() - 2));
            // sparse default: numeric 0 / first category (index 0) — already zeroed
            if (!body.empty()) {
                for (const std::string& ent : split_respecting_quotes(body, ',')) {
                    const std::string e = trim(ent);
                    const std::size_t sp = e.find_first_of(" \t");
                    if (sp == std::string::npos) throw MalformedRow("line " + std::to_string(line_no) + ": sparse entry without value");
                    int idx = 0;
                    try {
                        idx = std::stoi(e.substr(0, sp));
                    } catch (const std::exception&) {
                        throw MalformedRow("line " + std::to_string(line_no) + ": bad sparse index");
                    }
                    if (idx < 0 || static_cast<std::size_t>(idx) >= attrs.size())
                        throw MalformedRow("line " + std::to_string(line_no) + ": sparse index out of range");
                    row[static_cast<std::size_t>(idx)] = parse_cell(attrs[static_cast<std::size_t>(idx)], trim(e.substr(sp + 1)), line_no);
                }
            }
        } else {
            const std::vector<std::string> cells = split_respecting_quotes(t, ',');
            if (cells.size() != attrs.size())
                throw MalformedRow("line " + std::to_string(line_no) + ": expected " + std::to_string(attrs.size()) +
                                   " values, got " + std::to_string(cells.size()));
            for (std::size_t j = 0; j < attrs.size(); ++j) row[j] = parse_cell(attrs[j], cells[j], line_no);
        }
        rows.push_back(std::move(row));
    }

    if (relation_raw.empty()) throw ArffError("missing @relation");
    if (!in_data) throw ArffError("missing @data");

    std::string name;
    const int c = extract_label_count(relation_raw, name);
    if (c == 0) throw MissingLabelCount("-C 0 declares no labels");
    const std::size_t mc = static_cast<std::size_t>(c > 0 ? c : -c);
    if (mc >= attrs.size())
        throw MissingLabelCount("-C " + std::to_string(c) + " leaves no feature attributes (have " +
                                std::to_string(attrs.size()) + ")");

    const std::size_t label_begin = c > 0 ? 0 : attrs.size() - mc;
    const std::size_t label_end = label_begin + mc;

    for (std::size_t j = label_begin; j < label_end; ++j) {
        const RawAttribute& a = attrs[j];
        const bool binary = a.kind == AttrKind::Nominal && a.categories.size() == 2 &&
                            ((a.categories[0] == "0" && a.categories[1] == "1") ||
                             (a.categories[0] == "1" && a.categories[1] == "0"));
        if (!binary) throw NonBinaryLabel("label attribute '" + a.name + "' is not nominal over {0,1}");
    }

    LabeledDataset ds;
    ds.relation_name = name;
    for (std::size_t j = label_begin; j < label_end; ++j) ds.label_names.push_back(attrs[j].name);
    for (std::size_t j = 0; j < attrs.size(); ++j) {
        if (j >= label_begin && j < label_end) continue;
        AttributeSpec spec;
        spec.name = attrs[j].name;
        spec.kind = attrs[j].kind == AttrKind::Numeric ? AttrKind::Numeric : AttrKind::Nominal;
        spec.categories = attrs[j].categories;
        ds.attributes.push_back(std::move(spec));
    }

    const std::size_t n = rows.size();
    ds.features = Matrix(n, ds.attributes.size());
    ds.labels = BinaryMatrix(n, mc);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t fcol = 0;
        for (std::size_t j = 0; j < attrs.size(); ++j) {
            const double v = rows[i][j];
            if (j >= label_begin && j < label_end) {
                if (is_missing(v)) throw NonBinaryLabel("missing label value in row " + std::to_string(i + 1));
                // v is the category index; map through the category string
                const std::string& cat = attrs[j].categories[static_cast<std::size_t>(v)];
                ds.labels.at(i, j - label_begin) = cat == "1" ? 1 : 0;
            } else {
                ds.features.at(i, fcol++) = v;
            }
        }
    }
    return ds;
}

LabeledDataset parse_arff_text(std::string_view text) {
    std::istringstream iss{std::string(text)};
    return parse_arff(iss);
}

LabeledDataset parse_arff_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ArffError("cannot open '" + path + "'");
    return parse_arff(f);
}

std::string write_arff(const LabeledDataset& ds) {
    std::ostringstream os;
    os << "@relation '" << ds.relation_name << ": -C " << ds.m() << "'\n\n";
    for (const std::string& ln : ds.label_names) os << "@attribute " << quoted(ln) << " {0,1}\n";
    for (const AttributeSpec& a : ds.attributes) {
        os << "@attribute " << quoted(a.name) << ' ';
        if (a.kind == AttrKind::Numeric) {
            os << "numeric";
        } else {
            os << '{';
            for (std::size_t i = 0; i < a.categories.size(); ++i) {
                if (i) os << ',';
                os << quoted(a.categories[i]);
            }
            os << '}';
        }
        os << '\n';
    }
    os << "\n@data\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.m(); ++j) {
            if (j) os << ',';
            os << static_cast<int>(ds.labels.at(i, j));
        }
        for (std::size_t j = 0; j < ds.d(); ++j) {
            os << ',';
            const double v = ds.features.at(i, j);
            if (is_missing(v)) {
                os << '?';
            } else if (ds.attributes[j].kind == AttrKind::Nominal) {
                os << quoted(ds.attributes[j].categories[static_cast<std::size_t>(v)]);
            } else {
                os << format_double(v);
            }
        }
        os << '\n';
    }
    return os.str();
}

bool datasets_equal(const LabeledDataset& a, const LabeledDataset& b) {
    if (a.relation_name != b.relation_name || a.label_names != b.label_names) return false;
    if (a.attributes.size() != b.attributes.size()) return false;
    for (std::size_t j = 0; j < a.attributes.size(); ++j) {
        if (a.attributes[j].name != b.attributes[j].name || a.attributes[j].kind != b.attributes[j].kind ||
            a.attributes[j].categories != b.attributes[j].categories)
            return false;
    }
    if (!(a.labels == b.labels)) return false;
    if (a.features.rows != b.features.rows || a.features.cols != b.features.cols) return false;
    for (std::size_t i = 0; i < a.features.data.size(); ++i) {
        const double x = a.features.data[i], y = b.features.data[i];
        if (is_missing(x) != is_missing(y)) return false;
        if (!is_missing(x) && x != y) return false;
    }
    return true;
}

Matrix encode_features(const LabeledDataset& ds) {
    const std::size_t n = ds.n();
    std::size_t dp = 0;
    for (const AttributeSpec& a : ds.attributes) dp += a.kind == AttrKind::Numeric ? 1 : a.categories.size();

    Matrix out(n, dp);
    std::size_t col = 0;
    for (std::size_t j = 0; j < ds.d(); ++j) {
        const AttributeSpec& a = ds.attributes[j];
        if (a.kind == AttrKind::Numeric) {
            double sum = 0.0;
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = ds.features.at(i, j);
                if (!is_missing(v)) {
                    sum += v;
                    ++cnt;
                }
            }
            const double mean = cnt ? sum / static_cast<double>(cnt) : 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = ds.features.at(i, j);
                out.at(i, col) = is_missing(v) ? mean : v;
            }
            ++col;
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const double v = ds.features.at(i, j);
                if (!is_missing(v)) out.at(i, col + static_cast<std::size_t>(v)) = 1.0;
            }
            col += a.categories.size();
        }
    }
    return out;
}

SplitPair random_split(std::size_t n, double fraction, std::uint64_t seed) {
    const auto train_n = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (train_n == 0 || train_n >= n)
        throw DegenerateSplit("split of n=" + std::to_string(n) + " at fraction " + std::to_string(fraction) +
                              " leaves an empty side");
    Pcg32 rng = substream(seed, "random_split");
    std::vector<int> idx = shuffled_indices(n, rng);
    SplitPair out;
    out.train_indices.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_n));
    out.test_indices.assign(idx.begin() + static_cast<std::ptrdiff_t>(train_n), idx.end());
    return out;
}

}  // namespace automlc
