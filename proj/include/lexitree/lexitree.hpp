#pragma once

#include "errors.hpp"
#include "model.hpp"
#include "propagation.hpp"
#include "registry.hpp"
#include "rules_file.hpp"
#include "text.hpp"
#include "transform.hpp"
#include "xml.hpp"
