#pragma once

// Plain-text jet literals: one stored coefficient per line,
//
//   alpha beta re im
//
// with the multi-indices written as comma-separated integers, e.g.
// "2,0 0,1 1.5 -0.25".  Values are printed with max_digits10 so a
// write/read cycle reproduces the jet exactly.

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "jets.hpp"

namespace metriclab {

inline void write_jet(std::ostream& os, const RealJet& j) {
    os << std::setprecision(17);
    for (const auto& [k, c] : j.terms()) {
        for (size_t i = 0; i < k.alpha.size(); ++i)
            os << (i ? "," : "") << k.alpha[i];
        os << ' ';
        for (size_t i = 0; i < k.beta.size(); ++i)
            os << (i ? "," : "") << k.beta[i];
        os << ' ' << c.real() << ' ' << c.imag() << '\n';
    }
}

namespace detail {

inline std::vector<int> parse_multi_index(const std::string& s, int lineno) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stoi(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw std::runtime_error("jet literal line " + std::to_string(lineno) +
                                     ": bad multi-index '" + s + "'");
        }
    }
    if (out.empty())
        throw std::runtime_error("jet literal line " + std::to_string(lineno) +
                                 ": empty multi-index");
    return out;
}

}  // namespace detail

inline RealJet read_jet(std::istream& is) {
    std::string line;
    int lineno = 0;
    RealJet jet(1);
    bool have_dim = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string sa, sb;
        double re = 0.0, im = 0.0;
        if (!(ss >> sa >> sb >> re >> im))
            throw std::runtime_error("jet literal line " + std::to_string(lineno) +
                                     ": expected 'alpha beta re im'");
        std::string rest;
        if (ss >> rest)
            throw std::runtime_error("jet literal line " + std::to_string(lineno) +
                                     ": trailing content '" + rest + "'");
        MonomialKey key{detail::parse_multi_index(sa, lineno),
                        detail::parse_multi_index(sb, lineno)};
        if (!have_dim) {
            jet = RealJet(static_cast<int>(key.alpha.size()));
            have_dim = true;
        }
        try {
            jet.set_coeff(key, Complex(re, im));
        } catch (const std::exception& e) {
            throw std::runtime_error("jet literal line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return jet;
}

}  // namespace metriclab
