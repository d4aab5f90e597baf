import static io.restassured.RestAssured.given;
import static org.hamcrest.Matchers.containsString;
import org.junit.Test;

public class UsersOrdersPairApiTest {

    private static String baseUrlOfSut = "http://localhost:8080";

    @Test
    public void test1() {
        given().
            baseUri(baseUrlOfSut).
        when().
            get("/users/42/orders/1234?includeItems=true&currency=EUR").
        then().
            statusCode(200).
            assertThat().
            contentType("application/json").
            body("currency", containsString("EUR"));
    }

    @Test
    public void test2() {
        given().
            baseUri(baseUrlOfSut).
        when().
            get("/users/42/orders/1234?includeItems=true&currency=USD").
        then().
            statusCode(200).
            assertThat().
            contentType("application/json").
            body("currency", containsString("USD"));
    }
}
