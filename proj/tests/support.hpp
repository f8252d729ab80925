#pragma once

#include <string>

#include "hetnet/config.hpp"
#include "hetnet/netmodel.hpp"

namespace testing_support {

inline hetnet::ScenarioDescription description(const std::string& preset = "table1") {
  return hetnet::load_preset(preset).scenario;
}

inline hetnet::Scenario scenario(const std::string& preset = "table1") {
  return hetnet::validate(description(preset));
}

}  // namespace testing_support
