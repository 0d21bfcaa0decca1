#include <doctest.h>

#include <algorithm>

#include "evflow/model.hpp"
#include "testutil.hpp"

using namespace evflow;

TEST_CASE("ipv4 parses dotted quads and canonicalizes leading zeros") {
    auto a = Ipv4::parse("192.0.2.10");
    REQUIRE(a.has_value());
    CHECK(a->to_string() == "192.0.2.10");

    auto b = Ipv4::parse("198.051.100.007");
    REQUIRE(b.has_value());
    CHECK(b->to_string() == "198.51.100.7");
    CHECK(*b == *Ipv4::parse("198.51.100.7"));

    CHECK(Ipv4::parse("0.0.0.0")->to_string() == "0.0.0.0");
    CHECK(Ipv4::parse("255.255.255.255")->to_string() == "255.255.255.255");
}

TEST_CASE("ipv4 rejects malformed text") {
    CHECK_FALSE(Ipv4::parse("").has_value());
    CHECK_FALSE(Ipv4::parse("1.2.3").has_value());
    CHECK_FALSE(Ipv4::parse("1.2.3.4.5").has_value());
    CHECK_FALSE(Ipv4::parse("256.1.1.1").has_value());
    CHECK_FALSE(Ipv4::parse("1.2.3.999").has_value());
    CHECK_FALSE(Ipv4::parse("0001.2.3.4").has_value());  // four digits per octet
    CHECK_FALSE(Ipv4::parse("a.b.c.d").has_value());
    CHECK_FALSE(Ipv4::parse("1.2.3.4 ").has_value());
    CHECK_FALSE(Ipv4::parse("1..3.4").has_value());
    CHECK_FALSE(Ipv4::parse("-1.2.3.4").has_value());
}

TEST_CASE("port parsing accepts 1..65535 only") {
    CHECK(parse_port("443") == uint16_t{443});
    CHECK(parse_port("1") == uint16_t{1});
    CHECK(parse_port("65535") == uint16_t{65535});
    CHECK(parse_port("0042") == uint16_t{42});
    CHECK_FALSE(parse_port("0").has_value());
    CHECK_FALSE(parse_port("65536").has_value());
    CHECK_FALSE(parse_port("99999").has_value());
    CHECK_FALSE(parse_port("-1").has_value());
    CHECK_FALSE(parse_port("80x").has_value());
    CHECK_FALSE(parse_port("").has_value());
}

TEST_CASE("variant names round-trip") {
    CHECK(variant_name(Variant::AllParams) == "all-params");
    CHECK(variant_name(Variant::NoSni) == "no-sni");
    CHECK(variant_name(Variant::NoPort) == "no-port");
    CHECK(variant_name(Variant::NoPortSni) == "no-port-sni");
    for (Variant v : kAllVariants) {
        CHECK(parse_variant(variant_name(v)) == v);
    }
    CHECK_FALSE(parse_variant("all_params").has_value());
    CHECK_FALSE(parse_variant("").has_value());
}

TEST_CASE("required feature sets per variant") {
    const std::set<Feature> base{Feature::Time, Feature::ServerIp,
                                 Feature::ServerPort, Feature::ClientIp};

    auto all = required_features(Variant::AllParams);
    CHECK(all == std::set<Feature>{Feature::Time, Feature::ServerIp,
                                   Feature::ServerPort, Feature::ClientIp,
                                   Feature::ClientPort, Feature::Sni});

    auto no_sni = required_features(Variant::NoSni);
    CHECK(no_sni == std::set<Feature>{Feature::Time, Feature::ServerIp,
                                      Feature::ServerPort, Feature::ClientIp,
                                      Feature::ClientPort});

    auto no_port = required_features(Variant::NoPort);
    CHECK(no_port == std::set<Feature>{Feature::Time, Feature::ServerIp,
                                       Feature::ServerPort, Feature::ClientIp,
                                       Feature::Sni});

    auto no_port_sni = required_features(Variant::NoPortSni);
    CHECK(no_port_sni == base);

    // Every variant checks at least the base key; all-params checks everything.
    for (Variant v : kAllVariants) {
        auto req = required_features(v);
        CHECK(std::includes(req.begin(), req.end(), base.begin(), base.end()));
        CHECK(std::includes(all.begin(), all.end(), req.begin(), req.end()));
    }
}

TEST_CASE("feature names are kebab-case") {
    CHECK(feature_name(Feature::Time) == "time");
    CHECK(feature_name(Feature::ServerIp) == "server-ip");
    CHECK(feature_name(Feature::ServerPort) == "server-port");
    CHECK(feature_name(Feature::ClientIp) == "client-ip");
    CHECK(feature_name(Feature::ClientPort) == "client-port");
    CHECK(feature_name(Feature::Sni) == "sni");
}

TEST_CASE("time window validity and ordering") {
    CHECK(TimeWindow{0, 0}.valid());
    CHECK(TimeWindow{3000, 0}.valid());
    CHECK_FALSE(TimeWindow{-1, 0}.valid());
    CHECK_FALSE(TimeWindow{0, -1}.valid());
    CHECK(TimeWindow{1000, 2000} == TimeWindow{1000, 2000});
    CHECK(TimeWindow{1000, 0} < TimeWindow{2000, 0});
}

TEST_CASE("relations order by event id then flow id") {
    RelationSet s;
    s.insert({"e2", "f1"});
    s.insert({"e1", "f2"});
    s.insert({"e1", "f1"});
    auto it = s.begin();
    CHECK(*it++ == Relation{"e1", "f1"});
    CHECK(*it++ == Relation{"e1", "f2"});
    CHECK(*it++ == Relation{"e2", "f1"});
}

TEST_CASE("relation class names") {
    CHECK(relation_class_name(RelationClass::Ok) == "OK");
    CHECK(relation_class_name(RelationClass::Err1) == "ERR1");
    CHECK(relation_class_name(RelationClass::Err2) == "ERR2");
}

TEST_CASE("calendar oracle sanity") {
    // 1970-01-01 is day zero; a couple of fixed points.
    CHECK(evtest::days_from_civil(1970, 1, 1) == 0);
    CHECK(evtest::epoch_ms_oracle(1970, 1, 2, 0, 0, 0) == 86'400'000);
    CHECK(evtest::epoch_ms_oracle(2000, 3, 1, 0, 0, 0) ==
          951'868'800'000);  // leap-century boundary
}
