#pragma once

#include <string>

#include <json.hpp>

#include "heegner/genus.hpp"
#include "heegner/measures.hpp"
#include "heegner/surjectivity.hpp"

namespace heegner::io {

using json = nlohmann::ordered_json;

json gram_json(const ternary::Mat3& m);
ternary::Mat3 gram_from_json(const json& j);

json to_json(const genus::GenusRecord& g);
json to_json(const genus::GenusRecord& g, const measures::Measure& m, const measures::Measure& canonical,
             ternary::i64 D, ternary::i64 c);
json to_json(const surjectivity::SearchReport& r);
json to_json(const surjectivity::EigenvalueTable& t);
json to_json(const surjectivity::BoundReport& b);

std::string search_csv(const surjectivity::SearchReport& r);

}  // namespace heegner::io
