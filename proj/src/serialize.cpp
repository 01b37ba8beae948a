#include "qbp/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qbp {

using nlohmann::json;

std::string save(const QbpGraph& g) {
    check_structure(g);
    json j;
    j["version"] = 1;
    j["num_vars"] = g.num_vars;
    j["start"] = g.start;
    json nodes = json::array();
    for (const auto& n : g.nodes) {
        json jn;
        jn["id"] = n.id;
        switch (n.kind) {
            case NodeKind::Var:
                jn["kind"] = "var";
                jn["var"] = n.var;
                break;
            case NodeKind::Sink:
                jn["kind"] = "sink";
                jn["label"] = n.label;
                break;
            case NodeKind::Unlabeled:
                jn["kind"] = "unlabeled";
                break;
        }
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const auto& e : g.edges) {
        json je;
        je["from"] = e.from;
        je["to"] = e.to;
        if (e.bit == -1) je["bit"] = nullptr;
        else je["bit"] = e.bit;
        je["amp"] = json::array({e.amp.real(), e.amp.imag()});
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j.dump();
}

QbpGraph load(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("qbp file: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != 1) throw parse_error("qbp file: unsupported version");
        QbpGraph g;
        g.num_vars = j.at("num_vars").get<int>();
        g.start = j.at("start").get<int>();
        for (const auto& jn : j.at("nodes")) {
            Node n;
            n.id = jn.at("id").get<int>();
            std::string kind = jn.at("kind").get<std::string>();
            if (kind == "var") {
                n.kind = NodeKind::Var;
                n.var = jn.at("var").get<int>();
            } else if (kind == "sink") {
                n.kind = NodeKind::Sink;
                n.label = jn.at("label").get<int>();
            } else if (kind == "unlabeled") {
                n.kind = NodeKind::Unlabeled;
            } else {
                throw parse_error("qbp file: node " + std::to_string(n.id) + ": unknown kind '" +
                                  kind + "'");
            }
            g.nodes.push_back(n);
        }
        for (const auto& je : j.at("edges")) {
            Edge e;
            e.from = je.at("from").get<int>();
            e.to = je.at("to").get<int>();
            const auto& jb = je.at("bit");
            e.bit = jb.is_null() ? -1 : jb.get<int>();
            const auto& ja = je.at("amp");
            if (!ja.is_array() || ja.size() != 2)
                throw parse_error("qbp file: edge amp must be [re, im]");
            e.amp = cplx(ja[0].get<double>(), ja[1].get<double>());
            g.edges.push_back(e);
        }
        check_structure(g);
        return g;
    } catch (const json::exception& e) {
        throw parse_error(std::string("qbp file: ") + e.what());
    } catch (const structural_error& e) {
        throw parse_error(std::string("qbp file: ") + e.what());
    }
}

std::string to_dot(const QbpGraph& g) {
    std::ostringstream os;
    os << "digraph qbp {\n  rankdir=TB;\n";
    for (const auto& n : g.nodes) {
        os << "  n" << n.id << " [";
        switch (n.kind) {
            case NodeKind::Var:
                os << "label=\"x" << n.var << "\" shape=circle";
                break;
            case NodeKind::Sink:
                os << "label=\"" << n.label << "\" shape=doublecircle";
                break;
            case NodeKind::Unlabeled:
                os << "label=\"\" shape=circle style=dashed";
                break;
        }
        if (n.id == g.start) os << " penwidth=2";
        os << "];\n";
    }
    auto fmt_amp = [](const cplx& a) {
        std::ostringstream s;
        s << a.real();
        if (a.imag() != 0.0) s << (a.imag() > 0 ? "+" : "") << a.imag() << "i";
        return s.str();
    };
    for (const auto& e : g.edges) {
        os << "  n" << e.from << " -> n" << e.to << " [label=\"";
        if (e.bit != -1) os << e.bit << ":";
        os << fmt_amp(e.amp) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

void save_file(const QbpGraph& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << save(g);
}

QbpGraph load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load(ss.str());
}

}  // namespace qbp
