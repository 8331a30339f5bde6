package inv;

/** A stocked item. */
public class Item implements Comparable<Item> {
    public static final int MAX_QUANTITY = 1000;

    private final String name;
    private int quantity;
    private double price;
    char grade = 'B';

    public Item(String name, int quantity, double price) {
        this.name = name;
        this.quantity = quantity;
        this.price = price;
    }

    public String getName() {
        return name;
    }

    public int getQuantity() {
        return quantity;
    }

    public double getPrice() {
        return price;
    }

    public void setQuantity(int quantity) {
        this.quantity = Math.min(quantity, MAX_QUANTITY);
    }

    public double total() {
        return price * quantity;
    }

    public int compareTo(Item other) {
        return name.compareTo(other.name);
    }

    public boolean sameName(Object o) {
        Item that = (Item) o;
        return name.equals(that.name);
    }
}
