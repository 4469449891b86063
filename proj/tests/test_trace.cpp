#include <random>
#include <sstream>

#include <doctest.h>

#include "fixtures.hpp"
#include "fogcache/generator.hpp"
#include "fogcache/trace.hpp"

using namespace fogcache;

namespace {

const std::string kThreeRows =
    "day,hour,user_id,lat,lon,operator,cell_id,tech,app_class,bytes_down,bytes_up\n"
    "2015-10-01,8,u1,34.05,-118.25,AT&T,c1,lte,COM.NETFLIX.MEDIACLIENT,1000,100\n"
    "2015-10-01,9,u1,34.06,-118.24,,,wifi,COM.WEATHER.WEATHER,500,50\n"
    "2015-10-02,17,u2,34.10,-118.30,Verizon,v7,3g,COM.CNN.MOBILE,200,20\n";

Trace parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace_csv(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("single valid row") {
  const auto t = parse(std::string(kTraceHeader) +
                       "\n2015-10-01,0,u9,34,-118,Sprint,s1,lte,APP,1,0\n");
  CHECK(t.size() == 1);
  CHECK(t.meta().unique_users == 1);
  CHECK(t.records()[0].tech == Technology::kLte);
}

TEST_CASE("three-row fixture counts") {
  const auto t = parse(kThreeRows);
  CHECK(t.size() == 3);
  CHECK(t.meta().unique_users == 2);
  CHECK(t.meta().cells_per_operator.at("AT&T") == 1);
  CHECK(t.meta().cells_per_operator.at("Verizon") == 1);
  CHECK(t.meta().total_bytes == 1870);
  const auto s = trace_summary(t);
  CHECK(s.unique_users == 2);
  REQUIRE(s.operators.size() == 2);
  CHECK(s.operators[0].op == "AT&T");
  CHECK(s.operators[0].bytes == 1100);
}

TEST_CASE("empty trace has zero counts") {
  const Trace t;
  const auto s = trace_summary(t);
  CHECK(s.records == 0);
  CHECK(s.unique_users == 0);
  CHECK(s.total_bytes == 0);
  CHECK(s.operators.empty());
}

TEST_CASE("malformed rows name the row and field") {
  const std::string header = std::string(kTraceHeader) + "\n";
  auto msg = error_of(header + "2015-10-01,24,u1,34,-118,,,wifi,APP,1,1\n");
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("'hour'") != std::string::npos);
  CHECK(msg.find("hour out of range") != std::string::npos);

  msg = error_of(header + "2015-10-01,1,u1,34,-118,,,wifi,APP,1,1\n2015-13-01,1,u1,34,-118,,,wifi,APP,1,1\n");
  CHECK(msg.find("row 3") != std::string::npos);
  CHECK(msg.find("'day'") != std::string::npos);

  CHECK(error_of(header + "2015-10-01,1,u1,95,-118,,,wifi,APP,1,1\n").find("'lat'") !=
        std::string::npos);
  CHECK(error_of(header + "2015-10-01,1,u1,34,-118,X,c,5g,APP,1,1\n").find("'tech'") !=
        std::string::npos);
  CHECK(error_of(header + "2015-10-01,1,u1,34,-118,,,wifi,APP,-1,1\n").find("'bytes_down'") !=
        std::string::npos);
  CHECK(error_of(header + "2015-10-01,1,u1,34,-118,,,wifi,APP,1\n").find("row 2") !=
        std::string::npos);
  CHECK_FALSE(error_of("").empty());
  CHECK_FALSE(error_of(header).empty());
  CHECK(error_of("a,b,c\n").find("header") != std::string::npos);
}

TEST_CASE("cell presence must match technology") {
  using testing::record;
  auto r = record("u", 1, {34, -118}, "AT&T", "", Technology::kLte);
  CHECK(validate(r).has_value());
  r.cell_id = "c";
  CHECK_FALSE(validate(r).has_value());
  r.tech = Technology::kWifi;
  CHECK(validate(r).has_value());
}

TEST_CASE("csv round-trip preserves every record") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(33.7, 34.3), lon(-118.6, -117.7);
  std::vector<TraceRecord> recs;
  for (int i = 0; i < 300; ++i) {
    const bool cell = rng() % 2 == 0;
    auto r = testing::record("user," + std::to_string(rng() % 20), static_cast<int>(rng() % 24),
                             {lat(rng), lon(rng)}, cell ? "T-Mobile" : "",
                             cell ? "cell \"" + std::to_string(rng() % 50) + "\"" : "",
                             cell ? Technology::k3G : Technology::kWifi, "APP.X",
                             rng() % 1000000);
    recs.push_back(r);
  }
  const Trace t(recs);
  const auto back = parse(trace_to_csv(t));
  CHECK(back.records() == t.records());
  CHECK(back.meta() == t.meta());
  CHECK(trace_to_csv(back) == trace_to_csv(t));
}

TEST_CASE("generated trace with four operators summarises to four rows") {
  auto cfg = GeneratorConfig::defaults(1000.0);
  cfg.n_users = 60;
  cfg.n_hours = 24;
  const auto t = generate_trace(cfg);
  CHECK(trace_summary(t).operators.size() == 4);
  CHECK(parse(trace_to_csv(t)).records() == t.records());
}
