#pragma once

#include "field.hpp"
#include "interval.hpp"
#include "geometry.hpp"
#include "numeration.hpp"
#include "ol_region.hpp"
#include "encode.hpp"
#include "preprocess.hpp"
#include "select.hpp"
#include "params.hpp"
#include "online_common.hpp"
#include "online_mul.hpp"
#include "online_div.hpp"
#include "presets.hpp"
#include "io_json.hpp"
