// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "aimc/model.hpp"

namespace aimc::testing {

inline Rational R(const char* text) { return Rational::parse(text); }

inline std::string data_path(const std::string& name) { return std::string(AIMC_TEST_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ModelDocument load(const std::string& name) { return parse_document(read_file(data_path(name))); }

} // namespace aimc::testing

namespace doctest {
template <> struct StringMaker<aimc::Rational> {
    static String convert(const aimc::Rational& r) { return r.str().c_str(); }
};
} // namespace doctest
