#pragma once

#include "isingtri/catalog.hpp"
#include "isingtri/construct.hpp"
#include "isingtri/core.hpp"
#include "isingtri/oracle.hpp"
#include "isingtri/transfer.hpp"
#include "isingtri/verify.hpp"
