#include <gtest/gtest.h>

#include "json.hpp"
#include "xychain/property_suite.hpp"

using namespace xychain;

TEST(PropertySuite, PassesOnRandomCases) {
  SuiteOptions o;
  o.seed = 7;
  o.cases = 20;
  const PropertyReport r = run_property_suite(o);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.properties.size(), 10u);
  for (const auto& p : r.properties) EXPECT_TRUE(p.passed) << p.name << " worst " << p.worst;
}

TEST(PropertySuite, InjectedFaultFails) {
  SuiteOptions o;
  o.cases = 3;
  o.fault = InjectedFault::perturb_eigenvalue;
  const PropertyReport r = run_property_suite(o);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.properties[0].passed);
}

TEST(PropertySuite, ReportIndependentOfThreads) {
  SuiteOptions o;
  o.cases = 12;
  o.threads = 1;
  const std::string one = run_property_suite(o).to_json();
  o.threads = 3;
  EXPECT_EQ(run_property_suite(o).to_json(), one);
}

TEST(PropertySuite, EmptyRunAndSchema) {
  SuiteOptions o;
  o.cases = 0;
  const PropertyReport r = run_property_suite(o);
  EXPECT_TRUE(r.ok());
  const auto doc = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_TRUE(doc["properties"].empty());
}
