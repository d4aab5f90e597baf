//! End-to-end checks of the `restname` binary: exit codes, formats, file
//! handling, and the apply fixpoint, all through the real process boundary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/corpus")
        .join(name)
}

fn restname(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restname"))
        .args(args)
        .env_remove("RESTNAME_MAX_LEN")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn parse_writes_ir_json_with_one_test_per_method() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ir.json");
    let result = restname(&[
        "parse",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(0), "stderr: {}", stderr(&result));
    let json = fs::read_to_string(&out).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let tests = value["suite"]["tests"].as_array().unwrap();
    assert_eq!(tests.len(), 1);
    assert_eq!(tests[0]["original_name"], "test_3");
    assert_eq!(tests[0]["calls"][0]["path"], "/news");
    assert_eq!(tests[0]["setup"][0]["mechanism"], "sql");
}

#[test]
fn parse_of_several_inputs_emits_an_array_or_a_directory() {
    let fig1 = corpus("UsersOrdersApiTest.java");
    let fig3 = corpus("NewsApiTest.java");
    let stream = restname(&["parse", fig1.to_str().unwrap(), fig3.to_str().unwrap()]);
    assert_eq!(stream.status.code(), Some(0));
    let docs: Vec<serde_json::Value> = serde_json::from_str(&stdout(&stream)).unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["suite"]["name"], "UsersOrdersApiTest");
    assert_eq!(docs[1]["suite"]["name"], "NewsApiTest");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ir");
    let to_dir = restname(&[
        "parse",
        fig1.to_str().unwrap(),
        fig3.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(to_dir.status.code(), Some(0));
    assert!(out.join("UsersOrdersApiTest.json").is_file());
    assert!(out.join("NewsApiTest.json").is_file());
}

#[test]
fn malformed_source_exits_1_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("Bad.java");
    fs::write(
        &bad,
        "class Bad {\n    @Test\n    public void broken() {\n        given().get(42).then().statusCode(200);\n    }\n}\n",
    )
    .unwrap();
    let result = restname(&["parse", bad.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(1));
    let err = stderr(&result);
    assert!(err.contains("Bad.java:4:"), "stderr was: {err}");
}

#[test]
fn lenient_mode_downgrades_unsupported_constructs_to_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let odd = dir.path().join("Odd.java");
    fs::write(
        &odd,
        "class Odd {\n    @Test\n    public void t() {\n        given().spooky(\"x\").get(\"/a\").then().statusCode(200);\n    }\n}\n",
    )
    .unwrap();
    let strict = restname(&["parse", odd.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(1));
    let lenient = restname(&["parse", odd.to_str().unwrap(), "--lenient"]);
    assert_eq!(lenient.status.code(), Some(0), "{}", stderr(&lenient));
    assert!(stderr(&lenient).contains("unsupported construct"));
}

#[test]
fn name_condition_applies_suppression_on_single_test_class() {
    let result = restname(&[
        "name",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--convention",
        "condition",
    ]);
    assert_eq!(result.status.code(), Some(0), "stderr: {}", stderr(&result));
    let out = stdout(&result);
    let line = out.lines().nth(1).unwrap_or("");
    assert!(
        line.trim_end()
            .ends_with("test_0_getOnNewsWithQueryParamsEmptyCountryReturnsEmptyList"),
        "output was: {out}"
    );
}

#[test]
fn name_number_renders_the_baseline() {
    let result = restname(&[
        "name",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--convention",
        "number",
    ]);
    assert_eq!(result.status.code(), Some(0));
    assert!(stdout(&result).contains("test_0"));
}

#[test]
fn unknown_convention_value_exits_2() {
    let result = restname(&[
        "name",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--convention",
        "fancy",
    ]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn invalid_max_len_exits_2() {
    let result = restname(&[
        "name",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--max-len",
        "8",
    ]);
    assert_eq!(result.status.code(), Some(2));
    assert!(stderr(&result).contains("minimum 16"));
}

#[test]
fn test_without_calls_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("Setup.java");
    fs::write(
        &empty,
        "class Setup {\n    @Test\n    public void onlySetup() {\n        int x = 1;\n    }\n}\n",
    )
    .unwrap();
    let result = restname(&["name", empty.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(3));
    assert!(stderr(&result).contains("no HTTP call"));
}

#[test]
fn env_var_sets_default_max_len_and_flag_overrides_it() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_restname"))
        .args(["name", corpus("UsersOrdersApiTest.java").to_str().unwrap()])
        .env("RESTNAME_MAX_LEN", "30")
        .output()
        .unwrap();
    assert_eq!(with_env.status.code(), Some(0));
    let line = stdout(&with_env).lines().nth(1).unwrap_or("").to_string();
    let generated = line.split_whitespace().last().unwrap_or("");
    assert_eq!(generated.len(), 30, "env cap should truncate: {line}");

    let with_flag = Command::new(env!("CARGO_BIN_EXE_restname"))
        .args([
            "name",
            corpus("UsersOrdersApiTest.java").to_str().unwrap(),
            "--max-len",
            "120",
        ])
        .env("RESTNAME_MAX_LEN", "30")
        .output()
        .unwrap();
    let line = String::from_utf8_lossy(&with_flag.stdout)
        .lines()
        .nth(1)
        .unwrap_or("")
        .to_string();
    assert!(
        line.ends_with("test_0_getOnUsersOrdersWithQueryParamsIncludeItemsReturnsObject"),
        "flag should override env: {line}"
    );

    let bad_env = Command::new(env!("CARGO_BIN_EXE_restname"))
        .args(["name", corpus("UsersOrdersApiTest.java").to_str().unwrap()])
        .env("RESTNAME_MAX_LEN", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn report_renders_all_four_conventions() {
    let result = restname(&[
        "report",
        corpus("UsersOrdersApiTest.java").to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(result.status.code(), Some(0));
    let out = stdout(&result);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("original,number,result,query,condition"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("test1,test_0,test_0_getOnOrdersReturnsObject,"));
    assert!(row.contains("test_0_getOnUsersOrdersWithQueryParamsReturnsObject"));
    assert!(row.ends_with("test_0_getOnUsersOrdersWithQueryParamsIncludeItemsReturnsObject"));
}

#[test]
fn report_on_empty_suite_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("Nothing.java");
    fs::write(&empty, "class Nothing { }\n").unwrap();
    let result = restname(&["report", empty.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(result.status.code(), Some(0));
    assert_eq!(stdout(&result), "original,number,result,query,condition\n");
}

#[test]
fn report_json_round_trips() {
    let result = restname(&[
        "report",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(result.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&result)).unwrap();
    assert_eq!(rows[0]["original"], "test_3");
    assert_eq!(rows[0]["number"], "test_0");
}

#[test]
fn sort_reorders_source_general_endpoint_first() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("PermsTest.java");
    fs::write(
        &file,
        r#"class PermsTest {

    @Test
    public void specific() {
        given().get("/users/42/permissions").then().statusCode(200);
    }

    @Test
    public void general() {
        given().get("/users").then().statusCode(200);
    }
}
"#,
    )
    .unwrap();
    let templates = dir.path().join("templates.txt");
    fs::write(
        &templates,
        "# endpoint templates\n/users\n/users/{userId}/permissions\n",
    )
    .unwrap();
    let result = restname(&[
        "sort",
        file.to_str().unwrap(),
        "--templates",
        templates.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(0), "stderr: {}", stderr(&result));
    let out = stdout(&result);
    assert!(out.find("void general").unwrap() < out.find("void specific").unwrap());
    // names untouched by sort
    assert!(out.contains("void general") && out.contains("void specific"));
}

#[test]
fn sort_on_ir_json_emits_sorted_ir() {
    let dir = tempfile::tempdir().unwrap();
    let ir_path = dir.path().join("suite.json");
    let parse = restname(&[
        "parse",
        corpus("UsersOrdersPairApiTest.java").to_str().unwrap(),
        "--out",
        ir_path.to_str().unwrap(),
    ]);
    assert_eq!(parse.status.code(), Some(0));
    let sort = restname(&["sort", ir_path.to_str().unwrap()]);
    assert_eq!(sort.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&sort)).unwrap();
    assert_eq!(value["suite"]["tests"].as_array().unwrap().len(), 2);
}

#[test]
fn apply_to_out_dir_leaves_originals_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("NewsApiTest.java");
    fs::copy(corpus("NewsApiTest.java"), &src).unwrap();
    let before = fs::read_to_string(&src).unwrap();
    let out_dir = dir.path().join("build");
    let result = restname(&[
        "apply",
        src.to_str().unwrap(),
        "--convention",
        "condition",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(0), "stderr: {}", stderr(&result));
    assert_eq!(fs::read_to_string(&src).unwrap(), before);
    let copy = fs::read_to_string(out_dir.join("NewsApiTest.java")).unwrap();
    assert!(copy.contains("public void test_0_getOnNewsWithQueryParamsEmptyCountryReturnsEmptyList()"));
    assert!(!copy.contains("public void test_3()"));
}

#[test]
fn apply_in_place_twice_is_a_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("PairTest.java");
    fs::copy(corpus("UsersOrdersPairApiTest.java"), &src).unwrap();

    let first = restname(&["apply", src.to_str().unwrap(), "--in-place"]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let once = fs::read_to_string(&src).unwrap();
    assert!(once.contains("test_0_getOn"));

    let second = restname(&["apply", src.to_str().unwrap(), "--in-place"]);
    assert_eq!(second.status.code(), Some(0));
    let twice = fs::read_to_string(&src).unwrap();
    assert_eq!(twice, once, "second apply must not change the file");
}

#[test]
fn apply_rejects_ir_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let ir_path = dir.path().join("suite.json");
    let parse = restname(&[
        "parse",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--out",
        ir_path.to_str().unwrap(),
    ]);
    assert_eq!(parse.status.code(), Some(0));
    let apply = restname(&["apply", ir_path.to_str().unwrap()]);
    assert_eq!(apply.status.code(), Some(2));
}

#[test]
fn strict_ir_rejects_unknown_fields_and_lenient_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let ir_path = dir.path().join("suite.json");
    let parse = restname(&[
        "parse",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--out",
        ir_path.to_str().unwrap(),
    ]);
    assert_eq!(parse.status.code(), Some(0));
    let mut json = fs::read_to_string(&ir_path).unwrap();
    json = json.replace("\"original_name\"", "\"surprise\": true, \"original_name\"");
    fs::write(&ir_path, json).unwrap();

    let strict = restname(&["name", ir_path.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stderr(&strict).contains("unknown field 'surprise'"));

    let lenient = restname(&["name", ir_path.to_str().unwrap(), "--lenient"]);
    assert_eq!(lenient.status.code(), Some(0));
}

#[test]
fn missing_input_file_exits_1() {
    let result = restname(&["parse", "/no/such/file.java"]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn custom_fault_labels_feed_the_result_part() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("Faulty.java");
    // the fault annotation arrives via IR, so build the IR by hand
    let ir_path = dir.path().join("faulty.json");
    let parse = restname(&[
        "parse",
        corpus("NewsApiTest.java").to_str().unwrap(),
        "--out",
        ir_path.to_str().unwrap(),
    ]);
    assert_eq!(parse.status.code(), Some(0));
    let mut json = fs::read_to_string(&ir_path).unwrap();
    json = json.replace("\"faults\": []", "\"faults\": [{\"code\": \"F42\", \"label\": null}]");
    fs::write(&ir_path, &json).unwrap();
    drop(src);

    // without a map entry the code renders as a ShowsFaults list
    let bare = restname(&["name", ir_path.to_str().unwrap(), "--convention", "result"]);
    assert_eq!(bare.status.code(), Some(0));
    assert!(stdout(&bare).contains("ShowsFaults_F42"), "{}", stdout(&bare));

    // with a map entry the label wins
    let labels = dir.path().join("labels.json");
    fs::write(&labels, "{\"F42\": \"causesTimeoutOnBackend\"}").unwrap();
    let labeled = restname(&[
        "name",
        ir_path.to_str().unwrap(),
        "--convention",
        "result",
        "--fault-labels",
        labels.to_str().unwrap(),
    ]);
    assert_eq!(labeled.status.code(), Some(0));
    assert!(
        stdout(&labeled).contains("test_0_getOnNewsCausesTimeoutOnBackend"),
        "{}",
        stdout(&labeled)
    );

    // a malformed label map is a configuration error
    fs::write(&labels, "[1, 2]").unwrap();
    let broken = restname(&[
        "name",
        ir_path.to_str().unwrap(),
        "--fault-labels",
        labels.to_str().unwrap(),
    ]);
    assert_eq!(broken.status.code(), Some(2));
}

#[test]
fn kotlin_sources_apply_and_reach_a_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("NewsKotlinTest.kt");
    fs::write(
        &src,
        r#"class NewsKotlinTest {

    @Test
    fun test_0() {
        given().accept("application/json")
                .get("$baseUrlOfSut/news?country=")
                .then()
                .statusCode(200)
                .body("size()", equalTo(0))
    }
}
"#,
    )
    .unwrap();
    let first = restname(&["apply", src.to_str().unwrap(), "--in-place"]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let once = fs::read_to_string(&src).unwrap();
    assert!(once.contains("fun test_0_getOnNewsWithQueryParamsEmptyCountryReturnsEmptyList()"));
    let second = restname(&["apply", src.to_str().unwrap(), "--in-place"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&src).unwrap(), once);
}

#[test]
fn generated_suite_with_lifecycle_methods_applies_under_lenient_mode() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("ProductsApiTest.java");
    fs::write(
        &src,
        r#"import java.util.*;
import static io.restassured.RestAssured.given;
import static org.hamcrest.Matchers.*;
import org.junit.*;

public class ProductsApiTest {

    private static final SutHandler controller = new em.embedded.ProductsController();
    private static String baseUrlOfSut;

    @BeforeClass
    public static void initClass() throws Exception {
        baseUrlOfSut = controller.startSut();
        RestAssured.urlEncodingEnabled = false;
    }

    @AfterClass
    public static void tearDown() throws Exception {
        controller.stopSut();
    }

    @Before
    public void initTest() throws Exception {
        controller.resetStateOfSUT();
    }

    @Test(timeout = 60000)
    public void test_0() throws Exception {
        given().accept("*/*")
                .contentType("application/json")
                .body(" { \"name\": \"widget\", \"price\": 10 } ")
                .post(baseUrlOfSut + "/products")
                .then()
                .statusCode(201)
                .assertThat()
                .body("id", notNullValue());
    }

    @Test(timeout = 60000)
    public void test_1() throws Exception {
        String id_0 = given().accept("*/*")
                .get(baseUrlOfSut + "/products?includeArchived=true")
                .then()
                .statusCode(200)
                .extract().body().path("[0].id").toString();

        given().accept("*/*")
                .delete(baseUrlOfSut + "/products/" + id_0)
                .then()
                .statusCode(204);
    }

    @Test(timeout = 60000)
    public void test_2() throws Exception {
        given().accept("*/*")
                .get(baseUrlOfSut + "/products?includeArchived=true")
                .then()
                .statusCode(500)
                .assertThat()
                .body(isEmptyOrNullString());
    }
}
"#,
    )
    .unwrap();

    // the extract() continuation is outside the supported subset
    let strict = restname(&["apply", src.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(1));

    let lenient = restname(&["apply", src.to_str().unwrap(), "--lenient", "--in-place"]);
    assert_eq!(lenient.status.code(), Some(0), "stderr: {}", stderr(&lenient));
    assert!(stderr(&lenient).contains("unsupported construct"));
    let once = fs::read_to_string(&src).unwrap();

    // the 5xx test leads its path group, the POST follows, and the DELETE
    // test sorts last because its focal path extends /products
    let e500 = once
        .find("test_0_getOnProductsWithQueryParamsIncludeArchivedReturns500")
        .expect("5xx GET renamed");
    let post = once
        .find("test_1_postOnProductsReturns201")
        .expect("POST renamed");
    let del = once
        .find("test_2_deleteOnProductsReturns204")
        .expect("DELETE renamed");
    assert!(e500 < post && post < del, "order was wrong:\n{once}");
    assert!(once.contains("public static void initClass()"));
    let init = once.find("initClass").unwrap();
    let first_test = once.find("@Test").unwrap();
    assert!(init < first_test, "lifecycle methods must stay above the tests");

    let again = restname(&["apply", src.to_str().unwrap(), "--lenient", "--in-place"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&src).unwrap(), once);
}

#[test]
fn name_output_formats_agree() {
    for format in ["text", "json", "csv", "markdown"] {
        let result = restname(&[
            "name",
            corpus("NewsApiTest.java").to_str().unwrap(),
            "--format",
            format,
        ]);
        assert_eq!(result.status.code(), Some(0), "format {format}");
        assert!(
            stdout(&result).contains("test_0_getOnNewsWithQueryParamsEmptyCountryReturnsEmptyList"),
            "format {format} missing the generated name"
        );
    }
}
