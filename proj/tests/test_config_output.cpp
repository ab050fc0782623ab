// SPDX-License-Identifier: Apache-2.0
//
// isac-polyblock: IRS-assisted sensing and communication simulator
// Copyright (C) 2026 The isac-polyblock authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "isac/config.hpp"
#include "isac/output.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace isac;

namespace
{
    ScenarioConfig parse(const std::string &text)
    {
        std::istringstream in(text);
        return parse_config(in);
    }

    ErrorKind kind_of(const std::string &text)
    {
        try
        {
            parse(text);
        }
        catch (const Error &e)
        {
            return e.kind();
        }
        ADD_FAILURE() << "no error for:\n" << text;
        return ErrorKind::invalid_input;
    }

    std::string first_line(const std::string &s) { return s.substr(0, s.find('\n')); }
}

TEST(Config, DefaultFileMatchesBuiltInDefaults)
{
    const auto cfg = load_config(ISAC_SOURCE_DIR "/configs/default.ini");
    const ScenarioConfig def;
    EXPECT_NEAR(cfg.radio.sigma_s2, 1e-11, 1e-24);
    EXPECT_NEAR(cfg.radio.sigma_c2, def.radio.sigma_c2, 1e-24);
    EXPECT_NEAR(cfg.beta0, 1e-3, 1e-16);
    EXPECT_EQ(cfg.radio.P_A, def.radio.P_A);
    EXPECT_EQ(cfg.K(), 3u);
    EXPECT_EQ(cfg.vehicles[2].position, (Vec3{-60, -20, 0}));
    EXPECT_EQ(cfg.n_frames, 67);
    EXPECT_EQ(cfg.scheme, Scheme::proposed);
    EXPECT_EQ(cfg.rsu, (Vec3{0, 0, 10}));
    EXPECT_FALSE(cfg.fixed_eta.has_value());
}

TEST(Config, EmptyInputGivesDefaults)
{
    const auto cfg = parse("");
    EXPECT_EQ(cfg.K(), 3u);
    EXPECT_EQ(cfg.gamma_th, 1e3);
}

TEST(Config, UnitsConvert)
{
    auto cfg = parse("[scenario]\ngamma_th_db = 30\n[radio]\ntransmit_power_dbm = 20\n");
    EXPECT_NEAR(cfg.gamma_th, 1e3, 1e-9);
    EXPECT_NEAR(cfg.radio.P_A, 0.1, 1e-15);
    cfg = parse("[radio]\nbeta0 = 0.002\n");
    EXPECT_EQ(cfg.beta0, 0.002);
}

TEST(Config, VehiclesReplaceDefaults)
{
    const auto cfg = parse("[vehicle1]\nposition = -40, -15, 0\nspeed = 10\n[vehicle2]\nposition=-45,-15,0\n");
    ASSERT_EQ(cfg.K(), 2u);
    EXPECT_EQ(cfg.vehicles[0].speed, 10.0);
    EXPECT_EQ(cfg.vehicles[1].speed, 15.0);
    EXPECT_EQ(cfg.vehicles[1].position, (Vec3{-45, -15, 0}));
}

TEST(Config, SchemeAndFixedEta)
{
    const auto cfg = parse("[scenario]\nscheme = no_c_assist\nfixed_eta = 0.1,0.1,0.1,0.2,0.2,0.3\n");
    EXPECT_EQ(cfg.scheme, Scheme::no_c_assist);
    ASSERT_TRUE(cfg.fixed_eta.has_value());
    EXPECT_EQ(cfg.fixed_eta->size(), 6u);
}

TEST(Config, Errors)
{
    EXPECT_EQ(kind_of("[radio]\nbogus = 1\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[extras]\nx = 1\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[radio]\ntransmit_power = 0.1\ntransmit_power_dbm = 20\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[radio]\ntransmit_power = abc\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[array]\nirs_elements = 2.5\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[vehicle1]\nspeed = 3\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[vehicle2]\nposition = 0,-20,0\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[vehicle1]\nposition = 0,-20\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[scenario]\nscheme = nope\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[scenario]\nframes = 0\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[scenario]\nseed = -1\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[scenario\nseed = 1\n"), ErrorKind::config_error);
    EXPECT_EQ(kind_of("[scenario]\nfixed_eta = 0.5, 0.5\n"), ErrorKind::config_error);
    // trajectory through the array axis
    EXPECT_EQ(kind_of("[vehicle1]\nposition = -50, 0, 10\n"), ErrorKind::config_error);
    try
    {
        load_config("/nonexistent/scenario.ini");
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::config_error);
        EXPECT_NE(std::string(e.what()).find("cannot open"), std::string::npos);
    }
}

TEST(Output, FormatDouble)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1e-11), "1e-11");
    EXPECT_EQ(format_double(3.0), "3");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Output, CsvSchemas)
{
    ScenarioConfig cfg;
    cfg.n_frames = 2;
    const auto frames = run_trajectory(cfg);
    std::ostringstream os;
    write_csv(frames_table(frames), os);
    const std::string text = os.str();
    EXPECT_EQ(first_line(text), "n,vehicle,phi_true,phi_pred,phi_tracked,var_tracked,gamma_s,rate,feasible");
    // header + K rows per frame
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 3);

    os.str("");
    write_csv(allocation_table(frames), os);
    EXPECT_EQ(first_line(os.str()), "n,slot,eta,min_rate,feasible");

    SweepResult sr;
    SweepRow row;
    row.value = 100.0;
    row.mean_min_rate = 1.5;
    row.frames = 67;
    row.seed = 1;
    sr.rows.push_back(row);
    os.str("");
    write_csv(sweep_table(sr), os);
    EXPECT_EQ(os.str(), "scheme,param,value,mean_min_rate,mean_gamma_s,frames,seed\n"
                        "proposed,gamma_th,100,1.5,0,67,1\n");

    os.str("");
    write_csv(trace_table({{1, 0.5, 0.9, 4}}), os);
    EXPECT_EQ(os.str(), "iter,cbv,upper_bound,vertices\n1,0.5,0.9,4\n");
}

TEST(Output, JsonMirrorsCsv)
{
    Table t;
    t.columns = {"name", "x", "n"};
    t.add({std::string("a"), 0.25, std::int64_t{3}});
    t.add({std::string("b"), std::numeric_limits<double>::infinity(), std::int64_t{-1}});
    std::ostringstream os;
    write_json(t, os);
    const auto j = nlohmann::json::parse(os.str());
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["name"], "a");
    EXPECT_EQ(j[0]["x"], 0.25);
    EXPECT_EQ(j[0]["n"], 3);
    EXPECT_TRUE(j[1]["x"].is_null());
    EXPECT_THROW(t.add({std::string("short")}), Error);
    EXPECT_EQ(format_from_string("json"), Format::json);
    EXPECT_THROW(format_from_string("xml"), Error);
}

TEST(Output, WritesFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "isac_output_test";
    std::filesystem::remove_all(dir);
    Table t;
    t.columns = {"a"};
    t.add({1.0});
    const auto csv = write_table_file(t, Format::csv, dir / "nested", "t");
    const auto json = write_table_file(t, Format::json, dir / "nested", "t");
    EXPECT_EQ(csv.filename(), "t.csv");
    EXPECT_EQ(json.filename(), "t.json");
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "a\n1\n");
    std::filesystem::remove_all(dir);
}
