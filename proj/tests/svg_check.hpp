#pragma once

// Structural checks on rendered SVG, shared by the render, CLI and acceptance tests.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace svgcheck {

struct Element {
    std::string tag;
    std::map<std::string, std::string> attrs;
    std::string text;
};

struct Document {
    bool well_formed = false;
    std::string error;
    std::vector<Element> elements;  // document order, root first

    std::vector<const Element*> with_class(const std::string& cls) const {
        std::vector<const Element*> out;
        for (const auto& e : elements) {
            auto it = e.attrs.find("class");
            if (it != e.attrs.end() && it->second == cls) out.push_back(&e);
        }
        return out;
    }
    std::size_t count(const std::string& cls) const { return with_class(cls).size(); }

    std::vector<std::string> texts() const {
        std::vector<std::string> out;
        for (const auto& e : elements) {
            if (e.tag == "text") out.push_back(e.text);
        }
        return out;
    }
};

namespace detail {

inline void collect(const std::string& tag, const boost::property_tree::ptree& node, std::vector<Element>& out) {
    Element e;
    e.tag = tag;
    e.text = node.data();
    if (auto attrs = node.get_child_optional("<xmlattr>")) {
        for (const auto& [k, v] : *attrs) e.attrs[k] = v.data();
    }
    out.push_back(e);
    for (const auto& [k, child] : node) {
        if (k == "<xmlattr>" || k == "<xmlcomment>") continue;
        collect(k, child, out);
    }
}

}  // namespace detail

inline Document parse(const std::string& svg) {
    Document doc;
    boost::property_tree::ptree tree;
    std::istringstream in(svg);
    try {
        boost::property_tree::read_xml(in, tree);
    } catch (const boost::property_tree::xml_parser_error& e) {
        doc.error = e.what();
        return doc;
    }
    if (tree.size() != 1 || tree.begin()->first != "svg") {
        doc.error = "root element is not a single <svg>";
        return doc;
    }
    doc.well_formed = true;
    detail::collect("svg", tree.begin()->second, doc.elements);
    return doc;
}

inline double number(const Element& e, const std::string& attr) { return std::stod(e.attrs.at(attr)); }

}  // namespace svgcheck
